/** Editable adjacency grid. A cell is null (no edge) or a number,
 * where 0 is a real zero-weight edge, not the same thing as blank.
 * Edits live in the grid until the user saves; the diagonal is
 * locked because the model rejects self-loops.
 */
import type { DocumentObj, EdgeObj, ModelObj } from "./api.js";
import { CellParseError, parseWeightCell } from "./format.js";

export interface MatrixGrid {
  order: string[];
  names: Map<string, string>;
  cells: (number | null)[][];
  dirty: boolean;
}

export type EditResult =
  | { ok: true; value: number | null }
  | { ok: false; error: string };

export function gridFromModel(model: ModelObj): MatrixGrid {
  const order = model.concepts.map((c) => c.id);
  const names = new Map(model.concepts.map((c) => [c.id, c.name]));
  const index = new Map(order.map((id, i) => [id, i]));
  const cells: (number | null)[][] = order.map(() => order.map(() => null));
  for (const edge of model.edges) {
    const row = index.get(edge.source);
    const col = index.get(edge.target);
    if (row === undefined || col === undefined) continue;
    const cellRow = cells[row];
    if (cellRow) cellRow[col] = edge.weight;
  }
  return { order, names, cells, dirty: false };
}

export function editCell(
  grid: MatrixGrid,
  row: number,
  col: number,
  text: string,
): EditResult {
  if (row < 0 || row >= grid.order.length || col < 0 || col >= grid.order.length) {
    return { ok: false, error: `no cell at (${row}, ${col})` };
  }
  let value: number | null;
  try {
    value = parseWeightCell(text);
  } catch (exc) {
    if (exc instanceof CellParseError) return { ok: false, error: exc.message };
    throw exc;
  }
  if (row === col && value !== null) {
    return { ok: false, error: "the diagonal stays empty: no self-loops" };
  }
  const cellRow = grid.cells[row];
  if (!cellRow) return { ok: false, error: `no cell at (${row}, ${col})` };
  if (cellRow[col] !== value) {
    cellRow[col] = value;
    grid.dirty = true;
  }
  return { ok: true, value };
}

/** Edge list in row-major grid order. Zero weights stay; blanks do
 * not become edges.
 */
export function edgesFromGrid(grid: MatrixGrid): EdgeObj[] {
  const edges: EdgeObj[] = [];
  grid.cells.forEach((cellRow, row) => {
    cellRow.forEach((weight, col) => {
      if (weight === null) return;
      const source = grid.order[row];
      const target = grid.order[col];
      if (source === undefined || target === undefined) return;
      edges.push({ source, target, weight });
    });
  });
  return edges;
}

/** New document with the grid's edges in place of the old ones. The
 * concepts, scenarios, and config ride along untouched; this is the
 * unsaved working copy a save sends back to the registry.
 */
export function applyGridToDocument(
  doc: DocumentObj,
  grid: MatrixGrid,
): DocumentObj {
  return {
    ...doc,
    model: { ...doc.model, edges: edgesFromGrid(grid) },
  };
}
