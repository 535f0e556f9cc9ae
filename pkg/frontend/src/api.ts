import {
  AnnotationSubmission,
  ApiError,
  Progress,
  SessionDone,
  TaskView,
} from "./types.js";

async function readJson(response: Response): Promise<unknown> {
  const text = await response.text();
  try {
    return text ? JSON.parse(text) : {};
  } catch {
    return {};
  }
}

async function raiseOnError(response: Response): Promise<void> {
  if (response.ok) return;
  const body = (await readJson(response)) as { error?: string };
  throw new ApiError(response.status, body.error ?? response.statusText);
}

export class AnnotationClient {
  constructor(private readonly baseUrl: string = "") {}

  async nextTask(session: string): Promise<TaskView | SessionDone> {
    const response = await fetch(
      `${this.baseUrl}/api/tasks?session=${encodeURIComponent(session)}`,
    );
    await raiseOnError(response);
    return (await readJson(response)) as TaskView | SessionDone;
  }

  async submit(annotation: AnnotationSubmission): Promise<Progress> {
    return this.send(annotation, "POST");
  }

  async revise(annotation: AnnotationSubmission): Promise<Progress> {
    return this.send(annotation, "PUT");
  }

  private async send(
    annotation: AnnotationSubmission,
    method: "POST" | "PUT",
  ): Promise<Progress> {
    const response = await fetch(`${this.baseUrl}/api/annotations`, {
      method,
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(annotation),
    });
    await raiseOnError(response);
    return (await readJson(response)) as Progress;
  }

  async progress(session: string): Promise<Progress> {
    const response = await fetch(
      `${this.baseUrl}/api/progress?session=${encodeURIComponent(session)}`,
    );
    await raiseOnError(response);
    return (await readJson(response)) as Progress;
  }

  async exportSessions(sessions: string[]): Promise<string> {
    const joined = sessions.map(encodeURIComponent).join(",");
    const response = await fetch(
      `${this.baseUrl}/api/export?sessions=${joined}`,
    );
    await raiseOnError(response);
    return response.text();
  }
}

export function isTaskView(
  value: TaskView | SessionDone,
): value is TaskView {
  return (value as TaskView).task_id !== undefined;
}
