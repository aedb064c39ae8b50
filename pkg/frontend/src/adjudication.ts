import { ApiClient, ApiError } from './api.js';
import type { Task, TaskStats } from './types.js';

// The verdict marking a literal translation. At most one candidate per
// task can be it: two targets cannot both be the same headline.
const EXCLUSIVE_VERDICT = 'equivalent';

export type SubmitResult = 'advanced' | 'drained' | 'rejected';

/**
 * Drives the adjudication loop: fetch a task, collect one verdict per
 * candidate row, post them, move on. Rows left unselected are simply
 * not posted; a task with no selections is skipped without any POST.
 *
 * The verdict vocabulary is handed in from GET /schema. Nothing here
 * invents values the server did not declare.
 */
export class AdjudicationQueue {
  private task: Task | null = null;
  private drained = false;
  private readonly selections = new Map<string, string>();
  private readonly rowErrors = new Map<string, string>();
  private readonly skipped: string[] = [];

  constructor(
    private readonly api: ApiClient,
    readonly verdicts: readonly string[],
  ) {
    if (verdicts.length === 0) {
      throw new Error('server schema declared no verdicts');
    }
  }

  static async open(api: ApiClient): Promise<AdjudicationQueue> {
    const schema = await api.schema();
    const queue = new AdjudicationQueue(api, schema.verdicts);
    await queue.loadNext();
    return queue;
  }

  get current(): Task | null {
    return this.task;
  }

  get isDrained(): boolean {
    return this.drained;
  }

  selectedVerdict(targetId: string): string | null {
    return this.selections.get(targetId) ?? null;
  }

  errorFor(targetId: string): string | null {
    return this.rowErrors.get(targetId) ?? null;
  }

  /**
   * Keyboard shortcut table derived from the server vocabulary: the
   * first letter of each verdict when unambiguous, digits 1..n always.
   */
  get shortcuts(): ReadonlyMap<string, string> {
    const map = new Map<string, string>();
    const firsts = new Map<string, number>();
    for (const verdict of this.verdicts) {
      const first = verdict[0];
      firsts.set(first, (firsts.get(first) ?? 0) + 1);
    }
    this.verdicts.forEach((verdict, i) => {
      map.set(String(i + 1), verdict);
      if (firsts.get(verdict[0]) === 1) {
        map.set(verdict[0], verdict);
      }
    });
    return map;
  }

  pressKey(key: string, targetId: string): boolean {
    const verdict = this.shortcuts.get(key.toLowerCase());
    if (verdict === undefined) {
      return false;
    }
    this.select(targetId, verdict);
    return true;
  }

  select(targetId: string, verdict: string): void {
    if (this.task === null) {
      throw new Error('no task loaded');
    }
    if (!this.verdicts.includes(verdict)) {
      throw new RangeError(`verdict ${JSON.stringify(verdict)} is not in the server vocabulary`);
    }
    if (!this.task.candidates.some((c) => c.target_id === targetId)) {
      throw new RangeError(`no candidate ${targetId} on the current task`);
    }
    if (verdict === EXCLUSIVE_VERDICT) {
      for (const [other, chosen] of this.selections) {
        if (other !== targetId && chosen === EXCLUSIVE_VERDICT) {
          throw new Error(`another candidate is already marked ${EXCLUSIVE_VERDICT}`);
        }
      }
    }
    this.selections.set(targetId, verdict);
    this.rowErrors.delete(targetId);
  }

  clear(targetId: string): void {
    this.selections.delete(targetId);
    this.rowErrors.delete(targetId);
  }

  /** Move on without posting anything; the task stays pending server-side. */
  async skip(): Promise<Task | null> {
    if (this.task !== null) {
      this.skipped.push(this.task.source_id);
    }
    return this.loadNext();
  }

  /**
   * Post every selected verdict, then advance. A 422 pins an inline
   * error to its row and keeps the selection so the annotator can fix
   * and resubmit; the task does not advance past a rejection.
   */
  async submit(): Promise<SubmitResult> {
    if (this.task === null) {
      throw new Error('no task loaded');
    }
    if (this.selections.size === 0) {
      const next = await this.skip();
      return next === null ? 'drained' : 'advanced';
    }
    let rejected = false;
    for (const [targetId, verdict] of this.selections) {
      try {
        await this.api.postVerdict(this.task.source_id, targetId, verdict);
        this.selections.delete(targetId);
      } catch (error) {
        if (error instanceof ApiError && error.status === 422) {
          this.rowErrors.set(targetId, String(error.detail));
          rejected = true;
          continue;
        }
        throw error;
      }
    }
    if (rejected) {
      return 'rejected';
    }
    const next = await this.loadNext();
    return next === null ? 'drained' : 'advanced';
  }

  async loadNext(): Promise<Task | null> {
    this.task = await this.api.nextTask(this.skipped);
    this.drained = this.task === null;
    this.selections.clear();
    this.rowErrors.clear();
    return this.task;
  }

  stats(): Promise<TaskStats> {
    return this.api.taskStats();
  }
}
