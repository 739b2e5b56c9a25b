/** Reliability explorer: ranked pipeline list plus interactive curves.
 *
 * All numbers displayed here come from the service (ranking payload and
 * curve CSV); the explorer only parses, scales to screen coordinates and
 * reads out the nearest service-computed sample under the pointer.
 */

import type { GraphDocument, RankRow, Service } from "./types.js";

export interface CurveSet {
  /** column names as emitted by the service (carry rank and mask) */
  names: string[];
  /** sample grid in hours */
  grid: number[];
  /** one reliability column per name */
  columns: number[][];
}

export function parseCurvesCsv(text: string): CurveSet {
  const lines = text.trim().split("\n");
  const header = lines[0].split(",");
  const names = header.slice(1);
  const grid: number[] = [];
  const columns: number[][] = names.map(() => []);
  for (const line of lines.slice(1)) {
    const cells = line.split(",").map(Number);
    grid.push(cells[0]);
    cells.slice(1).forEach((value, i) => columns[i].push(value));
  }
  return { names, grid, columns };
}

export class ReliabilityExplorer {
  rows: RankRow[] = [];
  curves: CurveSet | null = null;
  tRef = 40_000;
  selectedRank: number | null = null;

  constructor(private service: Service) {}

  async explore(doc: GraphDocument, tMax: number, n: number, tRef?: number): Promise<void> {
    const ranking = await this.service.rank(doc, tRef);
    this.tRef = ranking.t_ref;
    this.rows = ranking.ranking;
    this.curves = parseCurvesCsv(await this.service.curvesCsv(doc, tMax, n, tRef));
    this.selectedRank = this.rows.length ? this.rows[0].rank : null;
  }

  select(rank: number): void {
    this.selectedRank = this.rows.some((r) => r.rank === rank) ? rank : this.selectedRank;
  }

  selectedRow(): RankRow | null {
    return this.rows.find((r) => r.rank === this.selectedRank) ?? null;
  }

  /** Hover readout: the nearest sampled (t, R) of the selected curve.
   * No interpolation: the value shown is exactly a service sample. */
  readoutAt(t: number): { t: number; r: number } | null {
    const curve = this.curves;
    if (!curve || this.selectedRank === null) return null;
    const column = curve.columns[this.selectedRank - 1];
    if (!column) return null;
    let best = 0;
    for (let i = 1; i < curve.grid.length; i++) {
      if (Math.abs(curve.grid[i] - t) < Math.abs(curve.grid[best] - t)) best = i;
    }
    return { t: curve.grid[best], r: column[best] };
  }

  renderListHtml(): string {
    if (!this.rows.length) return `<div class="rank-list empty">no pipelines</div>`;
    const items = this.rows.map((row) => {
      const selected = row.rank === this.selectedRank ? " selected" : "";
      const mask = row.mask_hex ?? "-";
      return (
        `<li class="rank-entry${selected}" data-rank="${row.rank}">` +
        `<span class="rank">#${row.rank}</span><span class="mask">${mask}</span>` +
        `<span class="r">R(${this.tRef}h)=${row.r_at_ref.toFixed(6)}</span></li>`
      );
    });
    return `<ol class="rank-list">${items.join("")}</ol>`;
  }

  renderDetailHtml(): string {
    const row = this.selectedRow();
    if (!row) return `<div class="rank-detail empty"></div>`;
    const seq = row.sequence.join(" &rarr; ");
    const mttf = row.mttf_hours === null ? "n/a" : `${row.mttf_hours.toFixed(0)} h`;
    return (
      `<div class="rank-detail"><div class="sequence">${seq}</div>` +
      `<div class="figures">&Sigma;&lambda;=${row.total_lambda} /Mh &middot; MTTF ${mttf}</div></div>`
    );
  }

  renderCurvesSvg(width = 640, height = 320): string {
    const curve = this.curves;
    if (!curve || !curve.grid.length) return `<svg class="curves"></svg>`;
    const tMax = curve.grid[curve.grid.length - 1] || 1;
    const px = (t: number) => (t / tMax) * (width - 60) + 50;
    const py = (r: number) => (1 - r) * (height - 40) + 10;
    const polylines = curve.columns.map((column, i) => {
      const points = column.map((r, j) => `${px(curve.grid[j]).toFixed(1)},${py(r).toFixed(1)}`);
      const selected = i + 1 === this.selectedRank ? " selected" : "";
      return `<polyline class="curve c${i}${selected}" data-rank="${i + 1}" fill="none" points="${points.join(" ")}"></polyline>`;
    });
    return (
      `<svg class="curves" viewBox="0 0 ${width} ${height}">` +
      `<line class="axis" x1="50" y1="10" x2="50" y2="${height - 30}"></line>` +
      `<line class="axis" x1="50" y1="${height - 30}" x2="${width - 10}" y2="${height - 30}"></line>` +
      polylines.join("") +
      `</svg>`
    );
  }
}
