import { AnnotationClient, isTaskView } from "./api.js";
import { Clock, TaskTimer } from "./timer.js";
import { ApiError, Progress, TaskView } from "./types.js";

export type SessionState =
  | { kind: "loading" }
  | { kind: "task"; view: TaskView }
  | { kind: "finished"; progress: Progress }
  | { kind: "error"; message: string };

/**
 * Drives one annotator session: fetch a task, time it, submit the choice,
 * advance. The server owns all persistent state; reloading the page and
 * resuming the same session name continues where it left off.
 */
export class SessionController {
  state: SessionState = { kind: "loading" };
  selectedCategory: string | null = null;
  selectedTarget: string | null = null;
  lastSubmittedTask: string | null = null;

  private readonly timer: TaskTimer;

  constructor(
    private readonly client: AnnotationClient,
    readonly session: string,
    clock?: Clock,
  ) {
    this.timer = new TaskTimer(clock);
  }

  async load(): Promise<SessionState> {
    this.state = { kind: "loading" };
    try {
      const next = await this.client.nextTask(this.session);
      if (isTaskView(next)) {
        this.state = { kind: "task", view: next };
        this.selectedCategory = null;
        this.selectedTarget = null;
        this.timer.start(); // the task is on screen from here
      } else {
        this.state = { kind: "finished", progress: next };
      }
    } catch (err) {
      this.state = { kind: "error", message: describe(err) };
    }
    return this.state;
  }

  selectCategory(label: string): void {
    this.selectedCategory = label;
  }

  selectTarget(label: string | null): void {
    this.selectedTarget = label;
  }

  /** Submit the current choice and advance to the next task. */
  async submit(): Promise<SessionState> {
    if (this.state.kind !== "task") {
      throw new Error("no task on screen");
    }
    if (!this.selectedCategory) {
      throw new Error("choose a category first");
    }
    const view = this.state.view;
    const elapsed = this.timer.stop();
    try {
      await this.client.submit({
        session: this.session,
        task_id: view.task_id,
        label: this.selectedCategory,
        elapsed_ms: elapsed,
        target_label: this.selectedTarget,
      });
      this.lastSubmittedTask = view.task_id;
    } catch (err) {
      if (err instanceof ApiError && err.status === 409) {
        // answered in another tab: just move on
        this.lastSubmittedTask = view.task_id;
      } else {
        this.timer.start(); // keep timing; the task is still on screen
        this.state = { kind: "error", message: describe(err) };
        return this.state;
      }
    }
    return this.load();
  }

  /** Replace the most recent answer; time spent reconsidering accrues. */
  async revise(label: string): Promise<void> {
    if (!this.lastSubmittedTask) {
      throw new Error("nothing to revise");
    }
    await this.client.revise({
      session: this.session,
      task_id: this.lastSubmittedTask,
      label,
      elapsed_ms: 1,
    });
  }

  async progress(): Promise<Progress> {
    return this.client.progress(this.session);
  }
}

function describe(err: unknown): string {
  if (err instanceof ApiError) return `${err.status}: ${err.message}`;
  return err instanceof Error ? err.message : String(err);
}
