export type Clock = () => number;

/** Measures how long a task has been on screen. */
export class TaskTimer {
  private startedAt: number | null = null;

  constructor(private readonly clock: Clock = () => Date.now()) {}

  start(): void {
    this.startedAt = this.clock();
  }

  running(): boolean {
    return this.startedAt !== null;
  }

  /** Milliseconds since start; stops the timer. Always at least 1. */
  stop(): number {
    if (this.startedAt === null) {
      throw new Error("timer was never started");
    }
    const elapsed = Math.max(1, Math.round(this.clock() - this.startedAt));
    this.startedAt = null;
    return elapsed;
  }
}
