import { describe, expect, it } from "vitest";
import type { OutcomeObj } from "../src/api.js";
import {
  COMPARISON_LIMIT,
  HISTORY_LIMIT,
  SLIDER_MAX,
  SLIDER_MIN,
  clampSliderValue,
  clampsForRun,
  configForRun,
  disengageAll,
  loadClampSet,
  newSession,
  pinRun,
  recordRun,
  selectModel,
  setClampEngaged,
  setClampValue,
  unpinRun,
} from "../src/state.js";

function fakeOutcome(name: string): OutcomeObj {
  return {
    scenario_name: name,
    baseline: { status: "converged", iterations: 1, period: null, final_state: {} },
    clamped: { status: "converged", iterations: 1, period: null, final_state: {} },
    relative_change: {},
  };
}

function fakeRecord(label: string, at = 0) {
  return { at, label, modelId: "m", outcome: fakeOutcome(label) };
}

describe("slider bounds", () => {
  it("pins the published range to [-1, 1]", () => {
    expect(SLIDER_MIN).toBe(-1);
    expect(SLIDER_MAX).toBe(1);
  });

  it("clamps any proposed value into the range", () => {
    expect(clampSliderValue(0.4)).toBe(0.4);
    expect(clampSliderValue(-3)).toBe(-1);
    expect(clampSliderValue(2)).toBe(1);
    expect(clampSliderValue(Number.NaN)).toBe(0);
    expect(clampSliderValue(Number.POSITIVE_INFINITY)).toBe(1);
  });

  it("applies the bound when a clamp is set", () => {
    const state = newSession();
    setClampValue(state, "A", 5);
    expect(state.clamps.get("A")).toEqual({ engaged: true, value: 1 });
  });
});

describe("clamp set", () => {
  it("sends exactly the engaged sliders", () => {
    const state = newSession();
    setClampValue(state, "A", 0.5);
    setClampValue(state, "B", -0.25);
    setClampEngaged(state, "B", false);
    setClampEngaged(state, "C", true);
    expect(clampsForRun(state)).toEqual({ A: 0.5, C: 0 });
  });

  it("re-engaging keeps the old value", () => {
    const state = newSession();
    setClampValue(state, "A", 0.75);
    setClampEngaged(state, "A", false);
    setClampEngaged(state, "A", true);
    expect(clampsForRun(state)).toEqual({ A: 0.75 });
  });

  it("disengageAll empties the run set without losing values", () => {
    const state = newSession();
    setClampValue(state, "A", 0.5);
    setClampValue(state, "B", -0.5);
    disengageAll(state);
    expect(clampsForRun(state)).toEqual({});
    expect(state.clamps.get("A")?.value).toBe(0.5);
  });

  it("loadClampSet replaces the working set, all engaged", () => {
    const state = newSession();
    setClampValue(state, "Z", 1);
    loadClampSet(state, { A: 0.5, B: -0.5 });
    expect(clampsForRun(state)).toEqual({ A: 0.5, B: -0.5 });
    expect(state.clamps.has("Z")).toBe(false);
  });

  it("selecting a model clears the working set", () => {
    const state = newSession();
    setClampValue(state, "A", 0.5);
    selectModel(state, "other");
    expect(state.selectedModelId).toBe("other");
    expect(state.clamps.size).toBe(0);
  });
});

describe("config selection", () => {
  it("is omitted entirely when untouched", () => {
    expect(configForRun(newSession())).toBeUndefined();
  });

  it("carries only the fields the user set", () => {
    const state = newSession();
    state.config.kernel = "kosko";
    state.config.steepness = 2;
    expect(configForRun(state)).toEqual({ kernel: "kosko", steepness: 2 });
  });
});

describe("history and pinning", () => {
  it("keeps runs in time order and trims to the limit", () => {
    const state = newSession();
    for (let i = 0; i < HISTORY_LIMIT + 3; i++) {
      recordRun(state, fakeRecord(`run ${i}`, i));
    }
    expect(state.history.length).toBe(HISTORY_LIMIT);
    expect(state.history[0]?.label).toBe("run 3");
    expect(state.history.at(-1)?.label).toBe(`run ${HISTORY_LIMIT + 2}`);
    const times = state.history.map((r) => r.at);
    expect([...times].sort((a, b) => a - b)).toEqual(times);
  });

  it("refuses a fourth pin", () => {
    const state = newSession();
    for (let i = 0; i < COMPARISON_LIMIT; i++) {
      expect(pinRun(state, fakeRecord(`p${i}`))).toBe(true);
    }
    expect(pinRun(state, fakeRecord("overflow"))).toBe(false);
    expect(state.pinned.length).toBe(COMPARISON_LIMIT);
  });

  it("unpinning frees a slot", () => {
    const state = newSession();
    pinRun(state, fakeRecord("a"));
    pinRun(state, fakeRecord("b"));
    unpinRun(state, 0);
    expect(state.pinned.map((r) => r.label)).toEqual(["b"]);
  });
});
