import { TuringClient } from './api.js';
import { RatingFlow } from './flow.js';
import { renderMatrix } from './matrix.js';
import { PanZoomViewer } from './viewer.js';

function must(id: string): HTMLElement {
  const el = document.getElementById(id);
  if (!el) {
    throw new Error(`missing element #${id}`);
  }
  return el;
}

/**
 * Wire the single-page rating flow: join a session from the URL
 * (?session=ID&api=URL), show one image at a time in the pan/zoom viewport,
 * take judgments via buttons or keys (R real, S synthetic, K skip), then
 * close and show the confusion matrix.
 */
export async function startApp(): Promise<void> {
  const params = new URLSearchParams(window.location.search);
  const apiBase = params.get('api') ?? 'http://127.0.0.1:8000';
  const sessionId = params.get('session');
  if (!sessionId) {
    must('status').textContent = 'Add ?session=SESSION_ID to the URL to join a session.';
    return;
  }

  const client = new TuringClient(apiBase);
  const flow = new RatingFlow(client, sessionId);
  const image = must('rating-image') as HTMLImageElement;
  const viewer = new PanZoomViewer(must('viewport'), image);
  const status = must('status');
  const ratingPanel = must('rating-panel');
  const reportPanel = must('report-panel');

  let busy = false;

  function refresh(): void {
    status.textContent = `${flow.rated} / ${flow.total} rated`
      + (flow.pendingCount > 0 ? ` (${flow.pendingCount} unsent)` : '');
    if (flow.phase === 'rating' && flow.current) {
      image.src = client.imageUrl(flow.current);
      viewer.reset();
    }
    if (flow.phase === 'exhausted') {
      status.textContent += ' — all items seen, press Close for the report';
    }
    if (flow.phase === 'closed' && flow.report) {
      ratingPanel.hidden = true;
      reportPanel.hidden = false;
      renderMatrix(flow.report, reportPanel);
    }
  }

  async function act(fn: () => Promise<unknown>): Promise<void> {
    if (busy) {
      return;
    }
    busy = true;
    try {
      await fn();
    } catch (err) {
      status.textContent = `error: ${err instanceof Error ? err.message : err}`;
    } finally {
      busy = false;
      refresh();
    }
  }

  must('btn-real').onclick = () => act(() => flow.judge('REAL'));
  must('btn-synth').onclick = () => act(() => flow.judge('SYNTH'));
  must('btn-skip').onclick = () => act(() => flow.judge('SKIP'));
  must('btn-close').onclick = () => act(() => flow.close());

  window.addEventListener('keydown', (e) => {
    if (flow.phase !== 'rating') {
      return;
    }
    if (e.key === 'r' || e.key === 'R') {
      act(() => flow.judge('REAL'));
    } else if (e.key === 's' || e.key === 'S') {
      act(() => flow.judge('SYNTH'));
    } else if (e.key === 'k' || e.key === 'K') {
      act(() => flow.judge('SKIP'));
    }
  });

  await act(() => flow.advance());
}

startApp();
