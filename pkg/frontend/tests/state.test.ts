import { describe, expect, it } from "vitest";

import {
  UNIFORM_WEIGHTS,
  WEIGHT_KEYS,
  applySliderMove,
  buildRequest,
  formatWeight,
  initialState,
  moveSlider,
  queryFailed,
  querySucceeded,
  togglePinned,
  weightSum,
} from "../src/state.js";
import type { QueryResponse } from "../src/types.js";

/** Small deterministic PRNG so the property run is reproducible. */
function mulberry32(seed: number): () => number {
  let a = seed >>> 0;
  return () => {
    a = (a + 0x6d2b79f5) | 0;
    let t = Math.imul(a ^ (a >>> 15), 1 | a);
    t = (t + Math.imul(t ^ (t >>> 7), 61 | t)) ^ t;
    return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
  };
}

describe("moveSlider", () => {
  it("setting w_text to 1 from uniform yields exactly (1, 0, 0)", () => {
    const moved = moveSlider({ ...UNIFORM_WEIGHTS }, "w_text", 1);
    expect(moved).toEqual({ w_text: 1, w_cit: 0, w_court: 0 });
  });

  it("setting w_text to 0 from (0.5, 0.5, 0) rescales the rest to (0, 1, 0)", () => {
    const moved = moveSlider({ w_text: 0.5, w_cit: 0.5, w_court: 0 }, "w_text", 0);
    expect(moved).toEqual({ w_text: 0, w_cit: 1, w_court: 0 });
  });

  it("splits the remainder equally when the other two are zero", () => {
    const moved = moveSlider({ w_text: 1, w_cit: 0, w_court: 0 }, "w_text", 0.4);
    expect(moved.w_cit).toBeCloseTo(0.3, 12);
    expect(moved.w_court).toBeCloseTo(0.3, 12);
  });

  it("clamps the slider value into [0, 1]", () => {
    expect(moveSlider({ ...UNIFORM_WEIGHTS }, "w_cit", 1.7).w_cit).toBe(1);
    expect(moveSlider({ ...UNIFORM_WEIGHTS }, "w_cit", -2).w_cit).toBe(0);
  });

  it("keeps the sum at 1 within 1e-6 over random move sequences", () => {
    const rand = mulberry32(1126);
    for (let run = 0; run < 500; run++) {
      let weights = { ...UNIFORM_WEIGHTS };
      const moves = 1 + Math.floor(rand() * 20);
      for (let i = 0; i < moves; i++) {
        const key = WEIGHT_KEYS[Math.floor(rand() * WEIGHT_KEYS.length)]!;
        weights = moveSlider(weights, key, rand());
        expect(Math.abs(weightSum(weights) - 1)).toBeLessThanOrEqual(1e-6);
        for (const k of WEIGHT_KEYS) {
          expect(weights[k]).toBeGreaterThanOrEqual(0);
          expect(weights[k]).toBeLessThanOrEqual(1);
        }
      }
    }
  });
});

describe("formatWeight", () => {
  it("renders three decimals", () => {
    expect(formatWeight(1 / 3)).toBe("0.333");
    expect(formatWeight(1)).toBe("1.000");
    expect(formatWeight(0)).toBe("0.000");
  });
});

function fakeResponse(k: number): QueryResponse {
  return {
    k,
    n: 0,
    weights: { ...UNIFORM_WEIGHTS },
    factor_mode: "whole_query",
    factor_filter: null,
    results: [],
    expansions: [],
    timing: { total_ms: 1 },
  };
}

describe("console state transitions", () => {
  it("records successful runs in history", () => {
    let state = initialState();
    state = { ...state, dispute: "a parody dispute" };
    const request = buildRequest(state);
    state = querySucceeded(state, request, fakeResponse(5));
    state = querySucceeded(state, request, fakeResponse(5));
    expect(state.history).toHaveLength(2);
    expect(state.history[1]!.id).toBeGreaterThan(state.history[0]!.id);
    expect(state.lastError).toBeNull();
  });

  it("keeps results and history on failure", () => {
    let state = initialState();
    const request = buildRequest({ ...state, dispute: "x" });
    state = querySucceeded(state, request, fakeResponse(3));
    const failed = queryFailed(state, "boom");
    expect(failed.lastError).toBe("boom");
    expect(failed.lastResponse).toEqual(state.lastResponse);
    expect(failed.history).toHaveLength(1);
  });

  it("pins at most two runs for comparison", () => {
    let state = initialState();
    state = togglePinned(state, 1);
    state = togglePinned(state, 2);
    state = togglePinned(state, 3);
    expect(state.pinned).toEqual([2, 3]);
    state = togglePinned(state, 2);
    expect(state.pinned).toEqual([3]);
  });
});
