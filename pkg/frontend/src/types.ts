export type TaskView = {
  task_id: string;
  project: string;
  path: string;
  snippet: string;
  snippet_first_line: number;
  comment_start_line: number;
  comment_end_line: number;
  categories: string[];
  guidelines: Record<string, string>;
  targets: string[];
  context_link: string;
  done: number;
  total: number;
};

export type SessionDone = {
  done: number;
  total: number;
};

export type Progress = {
  done: number;
  total: number;
};

export type AnnotationSubmission = {
  session: string;
  task_id: string;
  label: string;
  elapsed_ms: number;
  target_label?: string | null;
};

export class ApiError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}
