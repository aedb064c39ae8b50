import { AdjudicationQueue } from './adjudication.js';
import { AlignmentEditor } from './alignment.js';
import { ApiClient } from './api.js';
import { renderAdjudication, renderAlignment } from './render.js';

/**
 * Entry point. Query parameters pick the mode:
 *   ?server=http://127.0.0.1:8000&annotator=aram          adjudication
 *   ?server=...&annotator=aram&session=ckb-kmr            alignment
 */
async function start(root: HTMLElement): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const server = params.get('server') ?? 'http://127.0.0.1:8000';
  const annotator = params.get('annotator') ?? 'anonymous';
  const sessionId = params.get('session');
  const api = new ApiClient(server, annotator);

  if (sessionId !== null) {
    const editor = new AlignmentEditor(api, sessionId);
    await editor.load();
    renderAlignment(root, editor);
    return;
  }

  const queue = await AdjudicationQueue.open(api);
  renderAdjudication(root, queue);
}

if (typeof document !== 'undefined') {
  const root = document.getElementById('app');
  if (root !== null) {
    start(root).catch((error) => {
      root.textContent = String(error);
    });
  }
}
