/** Session state for one browser tab: which model is open, which
 * concepts are clamped at what values, the inference config to send,
 * recent outcomes, and the set pinned for comparison.
 */
import type { ConfigObj, OutcomeObj } from "./api.js";

export const SLIDER_MIN = -1;
export const SLIDER_MAX = 1;
export const SLIDER_STEP = 0.01;

export const HISTORY_LIMIT = 10;
export const COMPARISON_LIMIT = 3;

export interface ClampEntry {
  /** engaged means the slider participates in the next run */
  engaged: boolean;
  value: number;
}

export interface RunRecord {
  /** epoch milliseconds when the outcome arrived */
  at: number;
  label: string;
  modelId: string;
  outcome: OutcomeObj;
}

export interface SessionState {
  selectedModelId: string | null;
  clamps: Map<string, ClampEntry>;
  config: ConfigObj;
  history: RunRecord[];
  pinned: RunRecord[];
  runPending: boolean;
}

export function newSession(): SessionState {
  return {
    selectedModelId: null,
    clamps: new Map(),
    config: {},
    history: [],
    pinned: [],
    runPending: false,
  };
}

/** Force any proposed slider value into [-1, 1]; NaN becomes 0. */
export function clampSliderValue(value: number): number {
  if (Number.isNaN(value)) return 0;
  return Math.min(SLIDER_MAX, Math.max(SLIDER_MIN, value));
}

export function selectModel(state: SessionState, modelId: string): void {
  state.selectedModelId = modelId;
  state.clamps = new Map();
}

export function setClampValue(
  state: SessionState,
  conceptId: string,
  value: number,
): void {
  const entry = state.clamps.get(conceptId);
  const bounded = clampSliderValue(value);
  if (entry) {
    entry.value = bounded;
    entry.engaged = true;
  } else {
    state.clamps.set(conceptId, { engaged: true, value: bounded });
  }
}

export function setClampEngaged(
  state: SessionState,
  conceptId: string,
  engaged: boolean,
): void {
  const entry = state.clamps.get(conceptId);
  if (entry) {
    entry.engaged = engaged;
  } else if (engaged) {
    state.clamps.set(conceptId, { engaged: true, value: 0 });
  }
}

export function disengageAll(state: SessionState): void {
  for (const entry of state.clamps.values()) entry.engaged = false;
}

/** Replace the working set with a named scenario's clamps, all engaged. */
export function loadClampSet(
  state: SessionState,
  clamps: Record<string, number>,
): void {
  state.clamps = new Map();
  for (const [conceptId, value] of Object.entries(clamps)) {
    state.clamps.set(conceptId, {
      engaged: true,
      value: clampSliderValue(value),
    });
  }
}

/** Exactly the engaged sliders, as the clamp object a run sends. */
export function clampsForRun(state: SessionState): Record<string, number> {
  const out: Record<string, number> = {};
  for (const [conceptId, entry] of state.clamps) {
    if (entry.engaged) out[conceptId] = entry.value;
  }
  return out;
}

/** Config object for a run body, or undefined when every field is at
 * its default so the service's own defaults apply.
 */
export function configForRun(state: SessionState): ConfigObj | undefined {
  const entries = Object.entries(state.config).filter(
    ([, v]) => v !== undefined && v !== null && v !== "",
  );
  if (entries.length === 0) return undefined;
  return Object.fromEntries(entries) as ConfigObj;
}

/** Append to history, oldest first, keeping the last HISTORY_LIMIT. */
export function recordRun(state: SessionState, record: RunRecord): void {
  state.history.push(record);
  if (state.history.length > HISTORY_LIMIT) {
    state.history.splice(0, state.history.length - HISTORY_LIMIT);
  }
}

/** Pin an outcome for comparison. Refuses past COMPARISON_LIMIT. */
export function pinRun(state: SessionState, record: RunRecord): boolean {
  if (state.pinned.length >= COMPARISON_LIMIT) return false;
  state.pinned.push(record);
  return true;
}

export function unpinRun(state: SessionState, index: number): void {
  state.pinned.splice(index, 1);
}
