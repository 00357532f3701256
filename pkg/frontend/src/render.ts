// DOM rendering: queue cards with score band, overlay canvas, and actions.

import { bandGeometry, zoneOf } from './band.js';
import { drawOverlay } from './overlay.js';
import type { CardState, QueueSnapshot, QueueStore } from './queue.js';
import type { ReviewItem, Template, Thresholds } from './types.js';

export interface RenderDeps {
  root: HTMLElement;
  store: QueueStore;
  loadTemplate: (clientId: string) => Promise<Template>;
}

const el = <K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] => {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
};

function scoreBand(item: ReviewItem, thresholds: Thresholds): HTMLElement {
  const geometry = bandGeometry(item.score, thresholds);
  const band = el('div', 'band');
  const accept = el('div', 'band-accept');
  accept.style.width = `${geometry.acceptWidth * 100}%`;
  const hesitate = el('div', 'band-hesitate');
  hesitate.style.width = `${geometry.hesitateWidth * 100}%`;
  const reject = el('div', 'band-reject');
  reject.style.width = `${geometry.rejectWidth * 100}%`;
  band.append(accept, hesitate, reject);
  const marker = el('div', 'band-marker');
  marker.style.left = `${geometry.markerX * 100}%`;
  marker.title = `score ${item.score.toFixed(4)} (${zoneOf(item.score, thresholds)})`;
  band.append(marker);
  return band;
}

function stateBadge(state: CardState): HTMLElement {
  switch (state.kind) {
    case 'pending':
      return el('span', 'badge badge-pending', 'pending');
    case 'submitting':
      return el('span', 'badge badge-submitting', `${state.decision}…`);
    case 'unsent':
      return el('span', 'badge badge-unsent', `unsent ${state.decision} — will retry`);
    case 'conflict':
      return el(
        'span',
        'badge badge-conflict',
        `already ${state.winner.status} by ${state.winner.decided_by ?? 'someone else'}`,
      );
  }
}

function card(item: ReviewItem, snap: QueueSnapshot, deps: RenderDeps): HTMLElement {
  const { store, loadTemplate } = deps;
  const state = snap.states[item.request_id] ?? { kind: 'pending' };
  const box = el('article', 'card');

  const head = el('header', 'card-head');
  head.append(
    el('strong', undefined, item.client_id),
    el('span', 'muted', ` v${item.template_version} · ${item.request_id}`),
    stateBadge(state),
  );
  box.append(head);
  box.append(el('div', 'muted', `submitted ${item.submitted_at}`));

  if (snap.thresholds) box.append(scoreBand(item, snap.thresholds));

  const canvas = el('canvas', 'overlay');
  canvas.width = 360;
  canvas.height = 140;
  box.append(canvas);
  void loadTemplate(item.client_id)
    .then((template) => {
      const ctx = canvas.getContext('2d');
      if (ctx) drawOverlay(ctx, item, template, { width: canvas.width, height: canvas.height, pad: 8 });
    })
    .catch(() => canvas.replaceWith(el('div', 'muted', 'template unavailable')));

  const actions = el('div', 'actions');
  if (state.kind === 'pending' || state.kind === 'unsent') {
    const approve = el('button', 'approve', state.kind === 'unsent' ? 'retry' : 'approve');
    approve.onclick = () =>
      void store.submit(item.request_id, state.kind === 'unsent' ? state.decision : 'approve');
    actions.append(approve);
    if (state.kind === 'pending') {
      const deny = el('button', 'deny', 'deny');
      deny.onclick = () => void store.submit(item.request_id, 'deny');
      actions.append(deny);
    }
  } else if (state.kind === 'conflict') {
    const dismiss = el('button', 'dismiss', 'dismiss');
    dismiss.onclick = () => store.dismissConflict(item.request_id);
    actions.append(dismiss);
  }
  box.append(actions);
  return box;
}

export function render(snap: QueueSnapshot, deps: RenderDeps): void {
  const { root, store } = deps;
  root.replaceChildren();

  if (snap.banner) {
    root.append(el('div', 'banner', snap.banner));
  }

  for (const resolved of snap.resolved) {
    const note = el('div', 'resolved');
    note.append(
      el(
        'span',
        undefined,
        `${resolved.item.request_id} was ${resolved.winner.status} by ${resolved.winner.decided_by ?? 'another supervisor'}`,
      ),
    );
    const dismiss = el('button', 'dismiss', 'ok');
    dismiss.onclick = () => store.dismissResolved(resolved.item.request_id);
    note.append(dismiss);
    root.append(note);
  }

  if (snap.total === 0) {
    root.append(el('div', 'empty', 'no pending reviews'));
    return;
  }

  const list = el('div', 'cards');
  for (const item of snap.pageItems) list.append(card(item, snap, deps));
  root.append(list);

  if (snap.pageCount > 1) {
    const pager = el('nav', 'pager');
    const prev = el('button', undefined, '← newer');
    prev.disabled = snap.page === 0;
    prev.onclick = () => store.setPage(snap.page - 1);
    const label = el('span', undefined, `page ${snap.page + 1} of ${snap.pageCount} (${snap.total} pending)`);
    const next = el('button', undefined, 'older →');
    next.disabled = snap.page >= snap.pageCount - 1;
    next.onclick = () => store.setPage(snap.page + 1);
    pager.append(prev, label, next);
    root.append(pager);
  }
}
