/** Display formatting. Values are shown exactly as the service sent
 * them, rounded for reading; nothing here re-derives a result.
 */

/** Signed fixed-point label, "+0.25" / "-0.50". A value that rounds
 * to zero always reads "+0.00", never "-0.00".
 */
export function formatSigned(value: number, decimals = 2): string {
  let fixed = value.toFixed(decimals);
  if (Number(fixed) === 0) fixed = (0).toFixed(decimals);
  return fixed.startsWith("-") ? fixed : "+" + fixed;
}

/** Sign bucket at display precision, so highlighting always agrees
 * with the printed label.
 */
export function signAtPrecision(
  value: number,
  decimals = 2,
): "pos" | "neg" | "zero" {
  const rounded = Number(value.toFixed(decimals));
  if (rounded > 0) return "pos";
  if (rounded < 0) return "neg";
  return "zero";
}

/** Network scalars are shown with six decimals; a missing value
 * (undefined complexity and the like) reads "n/a".
 */
export function formatScalar(value: number | null, decimals = 6): string {
  if (value === null) return "n/a";
  return value.toFixed(decimals);
}

export class CellParseError extends Error {}

/** Matrix cell text for a weight. No edge is the empty string; an
 * explicit zero-weight edge is "0". Plain decimal notation only, so
 * a saved cell parses back to the same number.
 */
export function formatWeightCell(weight: number | null): string {
  if (weight === null) return "";
  let text = String(weight);
  if (text.includes("e") || text.includes("E")) {
    text = weight.toFixed(20);
    if (text.includes(".")) {
      text = text.replace(/0+$/, "").replace(/\.$/, "");
    }
  }
  return text;
}

/** Inverse of formatWeightCell for user-typed text. Blank means no
 * edge; anything else must be a finite number in [-1, 1].
 */
export function parseWeightCell(text: string): number | null {
  const trimmed = text.trim();
  if (trimmed === "") return null;
  const value = Number(trimmed);
  if (!Number.isFinite(value)) {
    throw new CellParseError(`not a number: ${JSON.stringify(trimmed)}`);
  }
  if (value < -1 || value > 1) {
    throw new CellParseError(`weight ${trimmed} outside [-1, 1]`);
  }
  return value;
}
