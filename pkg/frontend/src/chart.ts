/** Signed horizontal bar chart of per-concept relative change.
 *
 * Bars keep the model's concept order and are grouped under their
 * concept group headings. The printed label next to each bar is the
 * service value at two decimals; the bar geometry is only a visual
 * aid on top of it.
 */
import type { ModelObj } from "./api.js";
import { formatSigned, signAtPrecision } from "./format.js";

export interface BarSpec {
  concept: string;
  name: string;
  group: string;
  value: number;
  label: string;
  sign: "pos" | "neg" | "zero";
}

export interface GroupSpec {
  group: string;
  bars: BarSpec[];
}

const UNGROUPED = "other";

/** Bars in model concept order, bucketed by group in first-appearance
 * order. Concepts the outcome does not mention get a zero bar so the
 * chart shape is stable across runs.
 */
export function outcomeBars(
  model: ModelObj,
  change: Record<string, number>,
): GroupSpec[] {
  const groups: GroupSpec[] = [];
  const byName = new Map<string, GroupSpec>();
  for (const concept of model.concepts) {
    const groupName = concept.group ?? UNGROUPED;
    let bucket = byName.get(groupName);
    if (!bucket) {
      bucket = { group: groupName, bars: [] };
      byName.set(groupName, bucket);
      groups.push(bucket);
    }
    const value = change[concept.id] ?? 0;
    bucket.bars.push({
      concept: concept.id,
      name: concept.name,
      group: groupName,
      value,
      label: formatSigned(value),
      sign: signAtPrecision(value),
    });
  }
  return groups;
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

const ROW_H = 22;
const GROUP_H = 26;
const LABEL_W = 230;
const VALUE_W = 52;
const PAD = 8;

/** Render groups as a standalone SVG string. Width is the pixel width
 * of the whole figure; the value domain is fixed at [-1, 1] so charts
 * from different runs are visually comparable.
 */
export function renderChartSvg(groups: GroupSpec[], width = 680): string {
  const plotW = Math.max(120, width - LABEL_W - VALUE_W - PAD * 2);
  const axisX = LABEL_W + plotW / 2;
  const halfW = plotW / 2;

  let y = PAD;
  const parts: string[] = [];
  for (const group of groups) {
    parts.push(
      `<text x="${PAD}" y="${y + GROUP_H - 10}" class="chart-group">` +
        `${escapeXml(group.group)}</text>`,
    );
    y += GROUP_H;
    for (const bar of group.bars) {
      const mid = y + ROW_H / 2;
      const len = Math.min(Math.abs(bar.value), 1) * halfW;
      const x = bar.value < 0 ? axisX - len : axisX;
      parts.push(
        `<text x="${LABEL_W - 6}" y="${mid + 4}" text-anchor="end" ` +
          `class="chart-label">` +
          `${escapeXml(bar.concept)} ${escapeXml(bar.name)}</text>`,
        `<rect x="${x.toFixed(1)}" y="${y + 4}" ` +
          `width="${len.toFixed(1)}" height="${ROW_H - 8}" ` +
          `class="bar ${bar.sign}" data-concept="${escapeXml(bar.concept)}" ` +
          `data-value="${escapeXml(bar.label)}"/>`,
        `<text x="${LABEL_W + plotW + 6}" y="${mid + 4}" ` +
          `class="chart-value ${bar.sign}">${escapeXml(bar.label)}</text>`,
      );
      y += ROW_H;
    }
    y += PAD;
  }
  const height = y + PAD;
  const axis =
    `<line x1="${axisX}" y1="${PAD}" x2="${axisX}" ` +
    `y2="${height - PAD}" class="chart-axis"/>`;
  return (
    `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${width} ${height}" ` +
    `width="${width}" height="${height}" role="img">` +
    axis +
    parts.join("") +
    `</svg>`
  );
}
