import type { Link, Schema, SegmentOp, SessionView, Task, TaskStats } from './types.js';

/** Error for any non-2xx response, carrying the parsed `detail` payload. */
export class ApiError extends Error {
  readonly status: number;
  readonly detail: unknown;

  constructor(status: number, detail: unknown) {
    super(typeof detail === 'string' ? detail : `request failed with status ${status}`);
    this.name = 'ApiError';
    this.status = status;
    this.detail = detail;
  }

  /** current_version from a 409 stale-session response, if present. */
  get currentVersion(): number | null {
    if (
      typeof this.detail === 'object' &&
      this.detail !== null &&
      'current_version' in this.detail &&
      typeof (this.detail as Record<string, unknown>).current_version === 'number'
    ) {
      return (this.detail as { current_version: number }).current_version;
    }
    return null;
  }
}

export class ApiClient {
  constructor(
    readonly baseUrl: string,
    readonly annotator: string,
  ) {}

  private async request(method: string, path: string, body?: unknown): Promise<Response> {
    const response = await fetch(this.baseUrl + path, {
      method,
      headers: body === undefined ? undefined : { 'content-type': 'application/json' },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    if (!response.ok) {
      const raw = await response.text();
      let detail: unknown = raw;
      try {
        const parsed = JSON.parse(raw) as { detail?: unknown };
        if (parsed && typeof parsed === 'object' && 'detail' in parsed) {
          detail = parsed.detail;
        }
      } catch {
        // plain-text error body, keep it as-is
      }
      throw new ApiError(response.status, detail);
    }
    return response;
  }

  async schema(): Promise<Schema> {
    const response = await this.request('GET', '/schema');
    return (await response.json()) as Schema;
  }

  /** Next pending candidate set, or null when the queue is drained (204). */
  async nextTask(exclude: string[] = []): Promise<Task | null> {
    const query = new URLSearchParams({ annotator: this.annotator });
    if (exclude.length > 0) {
      query.set('exclude', exclude.join(','));
    }
    const response = await this.request('GET', `/tasks/next?${query.toString()}`);
    if (response.status === 204) {
      return null;
    }
    return (await response.json()) as Task;
  }

  async taskStats(): Promise<TaskStats> {
    const query = new URLSearchParams({ annotator: this.annotator });
    const response = await this.request('GET', `/tasks/stats?${query.toString()}`);
    return (await response.json()) as TaskStats;
  }

  async postVerdict(sourceId: string, targetId: string, verdict: string): Promise<void> {
    await this.request('POST', '/verdicts', {
      source_id: sourceId,
      target_id: targetId,
      verdict,
      annotator: this.annotator,
    });
  }

  async session(sessionId: string): Promise<SessionView> {
    const response = await this.request('GET', `/sessions/${sessionId}`);
    return (await response.json()) as SessionView;
  }

  /** Replace the session's link set; resolves to the new version. */
  async saveLinks(sessionId: string, version: number, links: Link[]): Promise<number> {
    const response = await this.request('POST', `/sessions/${sessionId}/links`, {
      version,
      links,
    });
    const body = (await response.json()) as { version: number };
    return body.version;
  }

  /** Apply merge/split/edit operations; resolves to the new version. */
  async applySegmentOps(sessionId: string, version: number, ops: SegmentOp[]): Promise<number> {
    const response = await this.request('POST', `/sessions/${sessionId}/segments`, {
      version,
      ops,
    });
    const body = (await response.json()) as { version: number };
    return body.version;
  }

  /** The sentence-pair TSV exactly as the server renders it. */
  async exportPairs(): Promise<string> {
    const response = await this.request('GET', '/export');
    return response.text();
  }
}
