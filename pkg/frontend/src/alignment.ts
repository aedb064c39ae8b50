import { ApiClient, ApiError } from './api.js';
import type { Link, SegmentOp, SegmentSide, SessionView } from './types.js';

export type SaveResult = 'saved' | 'conflict';

/**
 * Editing state for one alignment session.
 *
 * Links and segment operations accumulate locally and go to the server
 * on save(): operations first (they renumber segments), then the full
 * link list, each POST carrying the version the server gave us last.
 * A 409 means somebody else moved the session forward; the local edits
 * are kept untouched so the annotator can reload and reapply instead
 * of losing work.
 */
export class AlignmentEditor {
  private view: SessionView | null = null;
  private localLinks: Link[] = [];
  private stagedOps: SegmentOp[] = [];
  private dirtyFlag = false;
  private conflict: number | null = null;

  constructor(
    private readonly api: ApiClient,
    readonly sessionId: string,
  ) {}

  async load(): Promise<SessionView> {
    this.view = await this.api.session(this.sessionId);
    this.localLinks = this.view.links.map((l) => ({ src: [...l.src], tgt: [...l.tgt] }));
    this.stagedOps = [];
    this.dirtyFlag = false;
    this.conflict = null;
    return this.view;
  }

  get session(): SessionView {
    if (this.view === null) {
      throw new Error('session not loaded');
    }
    return this.view;
  }

  get links(): readonly Link[] {
    return this.localLinks;
  }

  get pendingOps(): readonly SegmentOp[] {
    return this.stagedOps;
  }

  /** True while local edits are not yet acknowledged by the server. */
  get dirty(): boolean {
    return this.dirtyFlag;
  }

  /** The server's version after a rejected save, null otherwise. */
  get conflictVersion(): number | null {
    return this.conflict;
  }

  /** Server-computed guideline violations for a saved link, by position. */
  violationsFor(linkIndex: number): string[] {
    const saved = this.session.links[linkIndex];
    return saved === undefined ? [] : saved.violations;
  }

  private checkIndices(side: SegmentSide, indices: number[]): void {
    const limit =
      side === 'src' ? this.session.src_segments.length : this.session.tgt_segments.length;
    for (const index of indices) {
      if (!Number.isInteger(index) || index < 0 || index >= limit) {
        throw new RangeError(`${side} segment index ${index} out of range (0..${limit - 1})`);
      }
    }
  }

  addLink(src: number[], tgt: number[]): void {
    if (src.length === 0 || tgt.length === 0) {
      throw new RangeError('a link needs at least one segment on each side');
    }
    this.checkIndices('src', src);
    this.checkIndices('tgt', tgt);
    this.localLinks.push({ src: [...src], tgt: [...tgt] });
    this.dirtyFlag = true;
  }

  removeLink(index: number): void {
    if (index < 0 || index >= this.localLinks.length) {
      throw new RangeError(`no link at position ${index}`);
    }
    this.localLinks.splice(index, 1);
    this.dirtyFlag = true;
  }

  mergeSegments(side: SegmentSide, first: number, count: number): void {
    this.stagedOps.push({ op: 'merge', side, first, count });
    this.dirtyFlag = true;
  }

  splitSegment(side: SegmentSide, index: number, at: number): void {
    this.stagedOps.push({ op: 'split', side, index, at });
    this.dirtyFlag = true;
  }

  editSegment(side: SegmentSide, index: number, text: string): void {
    this.stagedOps.push({ op: 'edit', side, index, text });
    this.dirtyFlag = true;
  }

  /**
   * Push staged operations and the link list. On success the session
   * is refetched so violation badges reflect what the server checked.
   * On a version conflict nothing local is discarded; the caller shows
   * a reload prompt and the annotator decides.
   */
  async save(): Promise<SaveResult> {
    const current = this.session;
    let version = current.version;
    try {
      if (this.stagedOps.length > 0) {
        version = await this.api.applySegmentOps(this.sessionId, version, this.stagedOps);
      }
      version = await this.api.saveLinks(this.sessionId, version, this.localLinks);
    } catch (error) {
      if (error instanceof ApiError && error.status === 409) {
        this.conflict = error.currentVersion;
        return 'conflict';
      }
      throw error;
    }
    this.stagedOps = [];
    this.view = await this.api.session(this.sessionId);
    this.localLinks = this.view.links.map((l) => ({ src: [...l.src], tgt: [...l.tgt] }));
    this.dirtyFlag = false;
    this.conflict = null;
    return 'saved';
  }

  /**
   * After a conflict: fetch the server's current state but keep the
   * local links and staged operations as the working diff, still
   * flagged unsaved.
   */
  async reloadKeepingEdits(): Promise<SessionView> {
    const keptLinks = this.localLinks;
    const keptOps = this.stagedOps;
    this.view = await this.api.session(this.sessionId);
    this.localLinks = keptLinks;
    this.stagedOps = keptOps;
    this.conflict = null;
    this.dirtyFlag = true;
    return this.view;
  }
}
