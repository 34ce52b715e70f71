/**
 * Console state and the weight-slider invariant.
 *
 * The displayed weights always sum to 1: moving one slider takes its value
 * and rescales the other two proportionally (equal split when the other two
 * are both zero). All state transitions are pure functions so they can be
 * tested without a DOM.
 */
import type { FactorMode, QueryRequestBody, QueryResponse, Weights } from "./types.js";

export const WEIGHT_KEYS = ["w_text", "w_cit", "w_court"] as const;
export type WeightKey = (typeof WEIGHT_KEYS)[number];

export const UNIFORM_WEIGHTS: Weights = { w_text: 1 / 3, w_cit: 1 / 3, w_court: 1 / 3 };

function clamp01(value: number): number {
  return Math.max(0, Math.min(1, value));
}

/** Move one slider; the other two rescale proportionally so the sum stays 1. */
export function moveSlider(current: Weights, moved: WeightKey, rawValue: number): Weights {
  const value = clamp01(rawValue);
  const others = WEIGHT_KEYS.filter((key) => key !== moved);
  const first = others[0] as WeightKey;
  const second = others[1] as WeightKey;
  const remainder = 1 - value;
  const restSum = current[first] + current[second];
  const next = { ...current, [moved]: value };
  if (restSum > 0) {
    next[first] = current[first] * (remainder / restSum);
    next[second] = current[second] * (remainder / restSum);
  } else {
    next[first] = remainder / 2;
    next[second] = remainder / 2;
  }
  return next;
}

export function weightSum(weights: Weights): number {
  return weights.w_text + weights.w_cit + weights.w_court;
}

/** Three-decimal readouts for display; the state keeps full precision. */
export function formatWeight(value: number): string {
  return value.toFixed(3);
}

export interface HistoryEntry {
  id: number;
  request: QueryRequestBody;
  response: QueryResponse;
}

export interface ConsoleState {
  dispute: string;
  weights: Weights;
  k: number;
  n: number;
  factorMode: FactorMode;
  inFlight: boolean;
  lastResponse: QueryResponse | null;
  lastError: string | null;
  history: HistoryEntry[];
  pinned: number[]; // history entry ids picked for the what-if compare
}

export function initialState(): ConsoleState {
  return {
    dispute: "",
    weights: { ...UNIFORM_WEIGHTS },
    k: 5,
    n: 2,
    factorMode: "whole_query",
    inFlight: false,
    lastResponse: null,
    lastError: null,
    history: [],
    pinned: [],
  };
}

export function applySliderMove(state: ConsoleState, key: WeightKey, value: number): ConsoleState {
  return { ...state, weights: moveSlider(state.weights, key, value) };
}

export function buildRequest(state: ConsoleState): QueryRequestBody {
  return {
    text: state.dispute,
    weights: { ...state.weights },
    k: state.k,
    n: state.n,
    factor_mode: state.factorMode,
  };
}

let nextHistoryId = 1;

export function querySucceeded(state: ConsoleState, request: QueryRequestBody, response: QueryResponse): ConsoleState {
  const entry: HistoryEntry = { id: nextHistoryId++, request, response };
  return {
    ...state,
    inFlight: false,
    lastResponse: response,
    lastError: null,
    history: [...state.history, entry],
  };
}

export function queryFailed(state: ConsoleState, message: string): ConsoleState {
  // Results and inputs survive a failed run; only the banner changes.
  return { ...state, inFlight: false, lastError: message };
}

export function togglePinned(state: ConsoleState, id: number): ConsoleState {
  const pinned = state.pinned.includes(id)
    ? state.pinned.filter((existing) => existing !== id)
    : [...state.pinned, id].slice(-2);
  return { ...state, pinned };
}
