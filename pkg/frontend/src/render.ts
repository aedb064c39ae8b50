import { AdjudicationQueue } from './adjudication.js';
import { AlignmentEditor } from './alignment.js';
import { columnDirection, textDirection } from './direction.js';
import type { ArticleView, SegmentView } from './types.js';

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
    node.dir = textDirection(text);
  }
  return node;
}

function articleCard(article: ArticleView, expanded: boolean): HTMLElement {
  const card = el('div', 'article');
  card.appendChild(el('h3', 'article-title', article.title));
  card.appendChild(el('span', 'article-meta', `${article.language} · ${article.date}`));
  if (article.lead) {
    card.appendChild(el('p', 'article-lead', article.lead));
  }
  if (expanded) {
    for (const paragraph of article.body) {
      card.appendChild(el('p', 'article-body', paragraph));
    }
  }
  return card;
}

export function renderAdjudication(root: HTMLElement, queue: AdjudicationQueue): void {
  root.replaceChildren();
  const task = queue.current;
  if (task === null) {
    root.appendChild(el('p', 'done', 'Queue drained. Nothing left to adjudicate.'));
    return;
  }

  const redraw = () => renderAdjudication(root, queue);
  const fail = (error: unknown) => {
    root.appendChild(el('p', 'error', String(error)));
  };

  root.appendChild(el('p', 'remaining', `${task.remaining} task(s) pending`));
  root.appendChild(articleCard(task.source, true));

  const table = el('div', 'candidates');
  for (const candidate of task.candidates) {
    const row = el('div', 'candidate');
    row.appendChild(el('span', 'rank', `#${candidate.rank}`));
    row.appendChild(articleCard(candidate.article, false));
    row.appendChild(el('span', 'score', candidate.score.toFixed(4)));
    row.appendChild(el('span', 'gate', candidate.matched_via));

    const selector = el('select', 'verdict');
    const blank = el('option', undefined, '');
    blank.value = '';
    selector.appendChild(blank);
    for (const verdict of queue.verdicts) {
      const option = el('option', undefined, verdict);
      option.value = verdict;
      selector.appendChild(option);
    }
    selector.value = queue.selectedVerdict(candidate.target_id) ?? '';
    selector.addEventListener('change', () => {
      try {
        if (selector.value === '') {
          queue.clear(candidate.target_id);
        } else {
          queue.select(candidate.target_id, selector.value);
        }
      } catch (error) {
        selector.value = queue.selectedVerdict(candidate.target_id) ?? '';
        fail(error);
        return;
      }
      redraw();
    });
    row.appendChild(selector);

    const rowError = queue.errorFor(candidate.target_id);
    if (rowError !== null) {
      row.appendChild(el('span', 'row-error', rowError));
    }
    table.appendChild(row);
  }
  root.appendChild(table);

  const controls = el('div', 'controls');
  const submit = el('button', undefined, 'Submit');
  submit.addEventListener('click', () => {
    queue.submit().then(redraw, fail);
  });
  const skip = el('button', undefined, 'Skip');
  skip.addEventListener('click', () => {
    queue.skip().then(redraw, fail);
  });
  controls.appendChild(submit);
  controls.appendChild(skip);
  root.appendChild(controls);

  const hint = [...queue.shortcuts.entries()].map(([key, verdict]) => `${key}=${verdict}`);
  root.appendChild(el('p', 'hint', `Keys on focused row: ${hint.join('  ')}; Enter submits.`));
}

function segmentColumn(
  title: string,
  segments: SegmentView[],
  onPick: (index: number) => void,
): HTMLElement {
  const column = el('div', 'segments');
  column.dir = columnDirection(segments.map((s) => s.text));
  column.appendChild(el('h4', undefined, title));
  for (const segment of segments) {
    const row = el('div', 'segment', segment.text);
    row.dataset.index = String(segment.index);
    if (segment.edited) {
      row.classList.add('edited');
    }
    if (segment.merged_from > 1) {
      row.classList.add('merged');
    }
    row.addEventListener('click', () => onPick(segment.index));
    column.appendChild(row);
  }
  return column;
}

export function renderAlignment(root: HTMLElement, editor: AlignmentEditor): void {
  root.replaceChildren();
  const session = editor.session;
  const redraw = () => renderAlignment(root, editor);
  const fail = (error: unknown) => {
    root.appendChild(el('p', 'error', String(error)));
  };

  const header = el('div', 'session-header');
  header.appendChild(el('h2', undefined, session.id));
  header.appendChild(el('span', 'version', `version ${session.version}`));
  if (editor.dirty) {
    header.appendChild(el('span', 'unsaved', 'unsaved changes'));
  }
  root.appendChild(header);

  if (editor.conflictVersion !== null) {
    const prompt = el('div', 'conflict');
    prompt.appendChild(
      el(
        'p',
        undefined,
        `The session moved to version ${editor.conflictVersion} elsewhere. ` +
          'Reload to continue; your edits stay staged.',
      ),
    );
    const reload = el('button', undefined, 'Reload keeping my edits');
    reload.addEventListener('click', () => {
      editor.reloadKeepingEdits().then(redraw, fail);
    });
    prompt.appendChild(reload);
    root.appendChild(prompt);
  }

  // Click one or more segments per side, then "Link" turns the picks
  // into one link. Plain state kept on the render closure.
  const picked: { src: number[]; tgt: number[] } = { src: [], tgt: [] };

  const columns = el('div', 'columns');
  columns.appendChild(
    segmentColumn(session.src_language, session.src_segments, (i) => picked.src.push(i)),
  );
  columns.appendChild(
    segmentColumn(session.tgt_language, session.tgt_segments, (i) => picked.tgt.push(i)),
  );
  root.appendChild(columns);

  const ribbon = el('div', 'links');
  editor.links.forEach((link, i) => {
    const row = el('div', 'link');
    row.appendChild(el('span', undefined, `${link.src.join(',')} → ${link.tgt.join(',')}`));
    for (const violation of editor.violationsFor(i)) {
      row.appendChild(el('span', 'badge', violation));
    }
    const drop = el('button', undefined, '×');
    drop.addEventListener('click', () => {
      editor.removeLink(i);
      redraw();
    });
    row.appendChild(drop);
    ribbon.appendChild(row);
  });
  root.appendChild(ribbon);

  const controls = el('div', 'controls');
  const link = el('button', undefined, 'Link picked');
  link.addEventListener('click', () => {
    try {
      editor.addLink(picked.src, picked.tgt);
    } catch (error) {
      fail(error);
      return;
    }
    redraw();
  });
  const save = el('button', undefined, 'Save');
  save.addEventListener('click', () => {
    editor.save().then(redraw, fail);
  });
  controls.appendChild(link);
  controls.appendChild(save);
  root.appendChild(controls);
}
