/** DOM wiring: sliders, query submission, results, history, what-if compare. */
import { ApiClient, ApiError, isAbort } from "./api.js";
import { canCompare, compareRuns } from "./compare.js";
import {
  ConsoleState,
  WEIGHT_KEYS,
  WeightKey,
  applySliderMove,
  buildRequest,
  formatWeight,
  initialState,
  queryFailed,
  querySucceeded,
  togglePinned,
} from "./state.js";
import { renderCompare, renderErrorBanner, renderHistory, renderResults } from "./render.js";

const DEFAULT_BASE_URL = "http://127.0.0.1:8800";

function byId<T extends HTMLElement>(id: string): T {
  const element = document.getElementById(id);
  if (!element) throw new Error(`missing element #${id}`);
  return element as T;
}

function setupConsole(): void {
  let state: ConsoleState = initialState();
  const params = new URLSearchParams(window.location.search);
  const client = new ApiClient(params.get("api") ?? DEFAULT_BASE_URL);

  const sliders = new Map<WeightKey, HTMLInputElement>(
    WEIGHT_KEYS.map((key) => [key, byId<HTMLInputElement>(`slider-${key}`)]),
  );
  const readouts = new Map<WeightKey, HTMLElement>(
    WEIGHT_KEYS.map((key) => [key, byId(`readout-${key}`)]),
  );
  const dispute = byId<HTMLTextAreaElement>("dispute");
  const kInput = byId<HTMLInputElement>("k");
  const nInput = byId<HTMLInputElement>("n");
  const factorMode = byId<HTMLSelectElement>("factor-mode");
  const runButton = byId<HTMLButtonElement>("run");
  const banner = byId("banner");
  const results = byId("results");
  const history = byId("history");
  const compare = byId("compare");
  const statsLine = byId("stats-line");

  function syncWeights(): void {
    for (const key of WEIGHT_KEYS) {
      sliders.get(key)!.value = String(state.weights[key]);
      readouts.get(key)!.textContent = formatWeight(state.weights[key]);
    }
  }

  function redraw(): void {
    syncWeights();
    runButton.disabled = state.inFlight;
    runButton.textContent = state.inFlight ? "Running…" : "Run retrieval";
    banner.innerHTML = state.lastError ?? "";
    results.innerHTML = state.lastResponse ? renderResults(state.lastResponse) : "";
    history.innerHTML = renderHistory(state.history, state.pinned);
    drawCompare();
  }

  function drawCompare(): void {
    const picked = state.pinned
      .map((id) => state.history.find((entry) => entry.id === id))
      .filter((entry) => entry !== undefined);
    if (picked.length !== 2) {
      compare.innerHTML = '<p class="hint">Pick two runs above to compare.</p>';
      return;
    }
    const [left, right] = picked as [NonNullable<(typeof picked)[0]>, NonNullable<(typeof picked)[1]>];
    if (!canCompare(left, right)) {
      compare.innerHTML =
        '<p class="hint">Runs must share the same dispute text, k, and n to compare.</p>';
      return;
    }
    compare.innerHTML = renderCompare(compareRuns(left, right));
  }

  for (const key of WEIGHT_KEYS) {
    sliders.get(key)!.addEventListener("input", (event) => {
      const value = Number((event.target as HTMLInputElement).value);
      state = applySliderMove(state, key, value);
      syncWeights();
    });
  }

  history.addEventListener("change", (event) => {
    const target = event.target as HTMLInputElement;
    const id = target.dataset["historyId"];
    if (id) {
      state = togglePinned(state, Number(id));
      redraw();
    }
  });

  async function run(): Promise<void> {
    state = {
      ...state,
      dispute: dispute.value.trim(),
      k: Math.max(1, Number(kInput.value) || 1),
      n: Math.max(0, Number(nInput.value) || 0),
      factorMode: factorMode.value === "per_factor" ? "per_factor" : "whole_query",
    };
    if (!state.dispute) {
      state = queryFailed(state, renderErrorBanner(0, "Enter a dispute description first."));
      redraw();
      return;
    }
    state = { ...state, inFlight: true, lastError: null };
    redraw();
    const request = buildRequest(state);
    try {
      const response = await client.query(request);
      state = querySucceeded(state, request, response);
    } catch (error) {
      if (isAbort(error)) return; // replaced by a newer query
      if (error instanceof ApiError) {
        state = queryFailed(state, renderErrorBanner(error.status, error.body));
      } else {
        state = queryFailed(state, renderErrorBanner(0, String(error)));
      }
    }
    redraw();
  }

  runButton.addEventListener("click", () => void run());
  dispute.addEventListener("keydown", (event) => {
    if (event.key === "Enter" && (event.ctrlKey || event.metaKey)) void run();
  });

  client
    .stats()
    .then((stats) => {
      statsLine.textContent =
        `corpus: ${stats.case_count} cases, ${stats.opinion_count} opinions, ` +
        `${stats.court_count} courts, ${stats.year_min}–${stats.year_max}`;
    })
    .catch(() => {
      statsLine.textContent = "service unreachable (is `fairuse serve` running?)";
    });

  redraw();
}

setupConsole();
