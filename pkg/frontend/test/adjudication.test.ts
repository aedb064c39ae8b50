import { afterEach, describe, expect, it, vi } from 'vitest';

import { AdjudicationQueue } from '../src/adjudication.js';
import { ApiClient } from '../src/api.js';
import type { ArticleView, Task } from '../src/types.js';

const SCHEMA = {
  verdicts: ['equivalent', 'possible', 'none'],
  matched_via: ['tag-date', 'image', 'both'],
  segment_ops: ['merge', 'split', 'edit'],
  languages: ['ckb', 'eng', 'kmr'],
  guidelines: { max_tokens: 80, max_ratio: 3.0 },
};

function article(id: string, title: string): ArticleView {
  return {
    id,
    title,
    lead: null,
    date: '2020-04-25',
    language: 'kmr',
    link: `https://kp.example/${id}`,
    body: [],
  };
}

function task(sourceId: string, targetIds: string[], remaining: number): Task {
  return {
    source_id: sourceId,
    source_language: 'ckb',
    target_language: 'kmr',
    source: article(sourceId, 'ناونیشان'),
    candidates: targetIds.map((targetId, i) => ({
      rank: i + 1,
      target_id: targetId,
      score: 0.9 - i * 0.1,
      matched_via: 'tag-date',
      article: article(targetId, `Title ${i}`),
    })),
    remaining,
  };
}

interface FakeServer {
  posts: Array<Record<string, unknown>>;
  /** queue of /tasks/next responses; null means 204 */
  tasks: Array<Task | null>;
  rejectWith?: { status: number; detail: string };
}

function installFetch(server: FakeServer): void {
  vi.stubGlobal('fetch', async (url: string | URL, init?: RequestInit) => {
    const path = String(url);
    if (path.includes('/schema')) {
      return new Response(JSON.stringify(SCHEMA), { status: 200 });
    }
    if (path.includes('/tasks/next')) {
      const next = server.tasks.shift();
      if (next === undefined || next === null) {
        return new Response(null, { status: 204 });
      }
      return new Response(JSON.stringify(next), { status: 200 });
    }
    if (path.includes('/tasks/stats')) {
      return new Response(
        JSON.stringify({ pending: server.tasks.length, completed: 0, verdicts: server.posts.length }),
        { status: 200 },
      );
    }
    if (path.includes('/verdicts')) {
      const body = JSON.parse(String(init?.body)) as Record<string, unknown>;
      if (server.rejectWith !== undefined) {
        const { status, detail } = server.rejectWith;
        return new Response(JSON.stringify({ detail }), { status });
      }
      server.posts.push(body);
      return new Response(JSON.stringify(body), { status: 201 });
    }
    throw new Error(`unexpected request ${path}`);
  });
}

function client(): ApiClient {
  return new ApiClient('http://fake', 'tester');
}

afterEach(() => {
  vi.unstubAllGlobals();
});

describe('AdjudicationQueue', () => {
  it('takes its verdict vocabulary from the server schema', async () => {
    const server: FakeServer = { posts: [], tasks: [task('s1', ['t1'], 1)] };
    installFetch(server);
    const queue = await AdjudicationQueue.open(client());
    expect(queue.verdicts).toEqual(['equivalent', 'possible', 'none']);
  });

  it('rejects verdict values the server never declared', async () => {
    const server: FakeServer = { posts: [], tasks: [task('s1', ['t1'], 1)] };
    installFetch(server);
    const queue = await AdjudicationQueue.open(client());
    expect(() => queue.select('t1', 'maybe')).toThrow(RangeError);
    expect(() => queue.select('t1', 'maybe')).toThrow(/vocabulary/);
  });

  it('allows at most one equivalent per task', async () => {
    const server: FakeServer = { posts: [], tasks: [task('s1', ['t1', 't2'], 1)] };
    installFetch(server);
    const queue = await AdjudicationQueue.open(client());
    queue.select('t1', 'equivalent');
    expect(() => queue.select('t2', 'equivalent')).toThrow(/already marked equivalent/);
    queue.select('t2', 'possible');
    expect(queue.selectedVerdict('t1')).toBe('equivalent');
    expect(queue.selectedVerdict('t2')).toBe('possible');
  });

  it('lets equivalent move after the first pick is cleared', async () => {
    const server: FakeServer = { posts: [], tasks: [task('s1', ['t1', 't2'], 1)] };
    installFetch(server);
    const queue = await AdjudicationQueue.open(client());
    queue.select('t1', 'equivalent');
    queue.clear('t1');
    queue.select('t2', 'equivalent');
    expect(queue.selectedVerdict('t2')).toBe('equivalent');
  });

  it('derives keyboard shortcuts from the vocabulary', async () => {
    const server: FakeServer = { posts: [], tasks: [task('s1', ['t1'], 1)] };
    installFetch(server);
    const queue = await AdjudicationQueue.open(client());
    const keys = queue.shortcuts;
    expect(keys.get('e')).toBe('equivalent');
    expect(keys.get('p')).toBe('possible');
    expect(keys.get('n')).toBe('none');
    expect(keys.get('1')).toBe('equivalent');
    expect(keys.get('3')).toBe('none');
    expect(queue.pressKey('P', 't1')).toBe(true);
    expect(queue.selectedVerdict('t1')).toBe('possible');
    expect(queue.pressKey('z', 't1')).toBe(false);
  });

  it('posts one verdict per selected row and advances', async () => {
    const server: FakeServer = {
      posts: [],
      tasks: [task('s1', ['t1', 't2'], 2), task('s2', ['t3'], 1)],
    };
    installFetch(server);
    const queue = await AdjudicationQueue.open(client());
    queue.select('t1', 'equivalent');
    queue.select('t2', 'none');
    const result = await queue.submit();
    expect(result).toBe('advanced');
    expect(server.posts).toHaveLength(2);
    expect(server.posts.map((p) => p.verdict).sort()).toEqual(['equivalent', 'none']);
    expect(server.posts.every((p) => p.source_id === 's1')).toBe(true);
    expect(server.posts.every((p) => p.annotator === 'tester')).toBe(true);
    expect(queue.current?.source_id).toBe('s2');
  });

  it('skipping posts nothing and excludes the task from the next fetch', async () => {
    const server: FakeServer = {
      posts: [],
      tasks: [task('s1', ['t1'], 2), task('s2', ['t2'], 2)],
    };
    let excludeSeen = '';
    installFetch(server);
    const realFetch = fetch;
    vi.stubGlobal('fetch', async (url: string | URL, init?: RequestInit) => {
      const parsed = new URL(String(url));
      if (parsed.pathname === '/tasks/next') {
        excludeSeen = parsed.searchParams.get('exclude') ?? '';
      }
      return realFetch(url, init);
    });
    const queue = await AdjudicationQueue.open(client());
    await queue.skip();
    expect(server.posts).toHaveLength(0);
    expect(excludeSeen).toBe('s1');
    expect(queue.current?.source_id).toBe('s2');
  });

  it('submit with nothing selected is a skip', async () => {
    const server: FakeServer = { posts: [], tasks: [task('s1', ['t1'], 1)] };
    installFetch(server);
    const queue = await AdjudicationQueue.open(client());
    const result = await queue.submit();
    expect(server.posts).toHaveLength(0);
    expect(result).toBe('drained');
    expect(queue.isDrained).toBe(true);
  });

  it('keeps the selection and pins an inline error on a 422', async () => {
    const server: FakeServer = { posts: [], tasks: [task('s1', ['t1'], 1)] };
    installFetch(server);
    const queue = await AdjudicationQueue.open(client());
    queue.select('t1', 'possible');
    server.rejectWith = { status: 422, detail: 'no candidate task for pair' };
    const result = await queue.submit();
    expect(result).toBe('rejected');
    expect(queue.selectedVerdict('t1')).toBe('possible');
    expect(queue.errorFor('t1')).toMatch(/no candidate task/);
    expect(queue.current?.source_id).toBe('s1');

    server.rejectWith = undefined;
    expect(await queue.submit()).toBe('drained');
    expect(server.posts).toHaveLength(1);
  });
});
