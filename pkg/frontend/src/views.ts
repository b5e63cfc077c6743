/** HTML builders for the individual panels. These return markup
 * strings from plain data; the wiring in main.ts owns the DOM and
 * the event handlers.
 */
import type {
  ConceptObj,
  MetricsObj,
  RunResultObj,
  ScenarioObj,
} from "./api.js";
import { ApiError } from "./api.js";
import { formatScalar, formatSigned, signAtPrecision } from "./format.js";
import type { MatrixGrid } from "./matrix.js";
import { formatWeightCell } from "./format.js";
import type { ClampEntry, RunRecord } from "./state.js";
import { SLIDER_MAX, SLIDER_MIN, SLIDER_STEP } from "./state.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export interface BrowserRow {
  id: string;
  name: string;
  fixture: boolean;
}

export function renderModelList(
  rows: BrowserRow[],
  selectedId: string | null,
): string {
  if (rows.length === 0) return `<p class="empty">no models yet</p>`;
  const items = rows.map((row) => {
    const classes = ["model-row"];
    if (row.id === selectedId) classes.push("selected");
    const tag = row.fixture ? `<span class="tag">bundled</span>` : "";
    return (
      `<li class="${classes.join(" ")}" data-model-id="${escapeHtml(row.id)}">` +
      `<button type="button" class="model-open" ` +
      `data-model-id="${escapeHtml(row.id)}">` +
      `${escapeHtml(row.name || row.id)}</button>${tag}</li>`
    );
  });
  return `<ul class="model-list">${items.join("")}</ul>`;
}

export function renderScenarioChips(scenarios: ScenarioObj[]): string {
  if (scenarios.length === 0) return "";
  const chips = scenarios.map(
    (s) =>
      `<button type="button" class="chip" ` +
      `data-scenario-name="${escapeHtml(s.name)}">${escapeHtml(s.name)}</button>`,
  );
  return (
    `<div class="chip-row"><span class="chip-hint">load clamp set:</span>` +
    chips.join("") +
    `</div>`
  );
}

/** One row per concept: engagement box, name, slider, live value.
 * The range input carries the hard [-1, 1] bounds.
 */
export function renderSliderRows(
  concepts: ConceptObj[],
  clamps: Map<string, ClampEntry>,
): string {
  const rows = concepts.map((concept) => {
    const entry = clamps.get(concept.id);
    const engaged = entry?.engaged ?? false;
    const value = entry?.value ?? 0;
    const id = escapeHtml(concept.id);
    return (
      `<div class="slider-row ${engaged ? "engaged" : "disengaged"}" ` +
      `data-concept-id="${id}">` +
      `<input type="checkbox" class="clamp-toggle" data-concept-id="${id}" ` +
      `${engaged ? "checked" : ""} title="clamp ${id}"/>` +
      `<label class="slider-name">${id} ${escapeHtml(concept.name)}</label>` +
      `<input type="range" class="clamp-slider" data-concept-id="${id}" ` +
      `min="${SLIDER_MIN}" max="${SLIDER_MAX}" step="${SLIDER_STEP}" ` +
      `value="${value}" ${engaged ? "" : "disabled"}/>` +
      `<span class="slider-value">${formatSigned(value)}</span>` +
      `</div>`
    );
  });
  return rows.join("");
}

/** Convergence badge for the clamped run of an outcome. */
export function renderBadge(result: RunResultObj): string {
  let text: string;
  let kind: string;
  if (result.status === "converged") {
    text = `converged in ${result.iterations} iterations`;
    kind = "ok";
  } else if (result.status === "limit-cycle") {
    text = `limit cycle, period ${result.period ?? "?"}`;
    kind = "warn";
  } else {
    text = `stopped after ${result.iterations} iterations`;
    kind = "warn";
  }
  return `<span class="badge ${kind}">${escapeHtml(text)}</span>`;
}

export function renderHistory(history: RunRecord[]): string {
  if (history.length === 0) return `<p class="empty">no runs yet</p>`;
  const items = history
    .map((record, index) => ({ record, index }))
    .reverse()
    .map(({ record, index }) => {
      const when = new Date(record.at).toLocaleTimeString();
      return (
        `<li><button type="button" class="history-show" ` +
        `data-history-index="${index}">${escapeHtml(record.label)}</button>` +
        `<span class="history-meta">${escapeHtml(record.modelId)} ` +
        `${when}</span>` +
        `<button type="button" class="history-pin" ` +
        `data-history-index="${index}">pin</button></li>`
      );
    });
  return `<ul class="history-list">${items.join("")}</ul>`;
}

/** Side-by-side pinned outcomes, one column each, per-concept cells
 * colored by sign at display precision. Row order follows the first
 * pinned outcome, which carries its model's concept order.
 */
export function renderComparisonTable(pinned: RunRecord[]): string {
  if (pinned.length === 0) {
    return `<p class="empty">pin up to three runs to compare them</p>`;
  }
  const order: string[] = [];
  const seen = new Set<string>();
  for (const record of pinned) {
    for (const conceptId of Object.keys(record.outcome.relative_change)) {
      if (!seen.has(conceptId)) {
        seen.add(conceptId);
        order.push(conceptId);
      }
    }
  }
  const heads = pinned
    .map(
      (record, index) =>
        `<th>${escapeHtml(record.label)} ` +
        `<button type="button" class="unpin" data-pin-index="${index}">` +
        `unpin</button></th>`,
    )
    .join("");
  const rows = order.map((conceptId) => {
    const cells = pinned
      .map((record) => {
        const value = record.outcome.relative_change[conceptId];
        if (value === undefined) return `<td class="missing">.</td>`;
        const sign = signAtPrecision(value);
        return `<td class="${sign}">${formatSigned(value)}</td>`;
      })
      .join("");
    return `<tr><th>${escapeHtml(conceptId)}</th>${cells}</tr>`;
  });
  return (
    `<table class="compare-table"><thead><tr><th>concept</th>${heads}</tr>` +
    `</thead><tbody>${rows.join("")}</tbody></table>`
  );
}

/** Scalar network parameters plus the centrality ranking table. */
export function renderMetricsView(metrics: MetricsObj): string {
  const scalars = [
    ["concepts", String(metrics.concept_count)],
    ["connections", String(metrics.connection_count)],
    ["density", formatScalar(metrics.density)],
    ["connections per component", formatScalar(metrics.connections_per_component)],
    ["complexity score", formatScalar(metrics.complexity_score)],
  ]
    .map(
      ([label, value]) =>
        `<div class="scalar"><dt>${escapeHtml(String(label))}</dt>` +
        `<dd>${escapeHtml(String(value))}</dd></div>`,
    )
    .join("");
  const rows = metrics.ranking
    .map(([conceptId, centrality], index) => {
      const cls = metrics.classes[conceptId] ?? "";
      const indeg = metrics.indegree[conceptId] ?? 0;
      const outdeg = metrics.outdegree[conceptId] ?? 0;
      return (
        `<tr><td>${index + 1}</td><td>${escapeHtml(conceptId)}</td>` +
        `<td>${escapeHtml(cls)}</td>` +
        `<td>${indeg.toFixed(2)}</td><td>${outdeg.toFixed(2)}</td>` +
        `<td>${centrality.toFixed(2)}</td></tr>`
      );
    })
    .join("");
  const warnings =
    metrics.warnings.length > 0
      ? `<p class="warnings">${escapeHtml(metrics.warnings.join("; "))}</p>`
      : "";
  return (
    `<dl class="scalars">${scalars}</dl>` +
    `<table class="metrics-table"><thead><tr><th>#</th><th>concept</th>` +
    `<th>class</th><th>in</th><th>out</th><th>centrality</th></tr></thead>` +
    `<tbody>${rows}</tbody></table>` +
    warnings
  );
}

/** The editable adjacency grid. Row = source, column = target; the
 * diagonal is rendered locked.
 */
export function renderMatrixTable(grid: MatrixGrid): string {
  const heads = grid.order
    .map((conceptId) => `<th>${escapeHtml(conceptId)}</th>`)
    .join("");
  const rows = grid.cells
    .map((cellRow, row) => {
      const rowId = grid.order[row] ?? "";
      const cells = cellRow
        .map((weight, col) => {
          if (row === col) return `<td class="diag"></td>`;
          const text = formatWeightCell(weight);
          return (
            `<td><input type="text" class="cell" data-row="${row}" ` +
            `data-col="${col}" value="${escapeHtml(text)}"/></td>`
          );
        })
        .join("");
      return `<tr><th>${escapeHtml(rowId)}</th>${cells}</tr>`;
    })
    .join("");
  return (
    `<table class="matrix-table"><thead><tr><th></th>${heads}</tr></thead>` +
    `<tbody>${rows}</tbody></table>`
  );
}

/** Inline error text, keeping the service's positioned detail. */
export function describeError(error: unknown): string {
  if (error instanceof ApiError) return error.message;
  if (error instanceof Error) return error.message;
  return String(error);
}
