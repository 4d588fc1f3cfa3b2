import { SessionReport } from './api.js';

export interface MatrixView {
  rows: { truth: string; judgedReal: number; judgedSynth: number }[];
  totalRated: number;
  skipped: number;
  unrated: number;
  accuracyPercent: string;
}

export function matrixView(report: SessionReport): MatrixView {
  const m = report.matrix;
  return {
    rows: [
      { truth: 'Real', judgedReal: m.real_judged_real, judgedSynth: m.real_judged_synth },
      { truth: 'Synthetic', judgedReal: m.synth_judged_real, judgedSynth: m.synth_judged_synth },
    ],
    totalRated: report.total_rated,
    skipped: report.skipped,
    unrated: report.unrated,
    accuracyPercent: `${(report.accuracy * 100).toFixed(1)}%`,
  };
}

export function renderMatrix(report: SessionReport, container: HTMLElement): void {
  const view = matrixView(report);
  const rows = view.rows.map((r) => `
      <tr>
        <th>${r.truth}</th>
        <td>${r.judgedReal}</td>
        <td>${r.judgedSynth}</td>
      </tr>`).join('');
  container.innerHTML = `
    <table class="confusion-matrix">
      <thead>
        <tr><th></th><th>Judged real</th><th>Judged synthetic</th></tr>
      </thead>
      <tbody>${rows}</tbody>
    </table>
    <p>Rated ${view.totalRated}, skipped ${view.skipped}, unrated ${view.unrated}.
       Accuracy ${view.accuracyPercent}.</p>`;
}
