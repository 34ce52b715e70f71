/**
 * HTML builders for the console views.
 *
 * Every number shown comes from the response body; the only arithmetic here
 * is the bar-segment product (weight x component), which is what the stacked
 * bars visualize. Each segment carries its contribution in a data attribute
 * so the recomposition invariant is checkable from the DOM.
 */
import type { CompareView } from "./compare.js";
import type { HistoryEntry } from "./state.js";
import type { ExpansionEntry, QueryResponse, RankedResult, Weights } from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

interface Segment {
  label: "text" | "citation" | "court";
  contribution: number;
}

function segments(result: RankedResult, weights: Weights): Segment[] {
  return [
    { label: "text", contribution: weights.w_text * result.scores.text_sim },
    { label: "citation", contribution: weights.w_cit * result.scores.citation },
    { label: "court", contribution: weights.w_court * result.scores.court },
  ];
}

function barHtml(result: RankedResult, weights: Weights): string {
  const parts = segments(result, weights)
    .map(
      (segment) => `
      <span class="bar-segment bar-${segment.label}"
            data-contribution="${segment.contribution}"
            style="width: ${(segment.contribution * 100).toFixed(2)}%"
            title="${segment.label}: ${segment.contribution.toFixed(3)}"></span>`,
    )
    .join("");
  return `<div class="score-bar" role="img" aria-label="score breakdown">${parts}</div>`;
}

function excerptsHtml(result: RankedResult): string {
  const blocks = Object.entries(result.excerpts)
    .filter(([, texts]) => texts.length > 0)
    .map(
      ([factor, texts]) => `
      <details class="excerpt">
        <summary>${escapeHtml(factor)} (${texts.length})</summary>
        ${texts.map((text) => `<blockquote>${escapeHtml(text)}</blockquote>`).join("")}
      </details>`,
    );
  return blocks.join("");
}

export function renderResultCard(result: RankedResult, weights: Weights): string {
  const scores = result.scores;
  return `
  <article class="result-card" id="case-${escapeHtml(result.case_id)}" data-fused="${scores.fused}">
    <header>
      <span class="rank">#${result.rank}</span>
      <h3>${escapeHtml(result.case_name)} <small>(${result.year}, ${escapeHtml(result.court_id)})</small></h3>
      <span class="fused">${scores.fused.toFixed(3)}</span>
    </header>
    ${barHtml(result, weights)}
    <dl class="components">
      <dt>text</dt><dd>${scores.text_sim.toFixed(3)}</dd>
      <dt>citation</dt><dd>${scores.citation.toFixed(3)}</dd>
      <dt>court</dt><dd>${scores.court.toFixed(3)}</dd>
    </dl>
    ${excerptsHtml(result)}
  </article>`;
}

function expansionsHtml(expansions: ExpansionEntry[]): string {
  if (expansions.length === 0) {
    return "";
  }
  const items = expansions
    .map(
      (expansion) => `
      <li>
        <span class="case-id">${escapeHtml(expansion.case_id)}</span>
        cited by <a href="#case-${escapeHtml(expansion.source_case_id)}">${escapeHtml(
          expansion.source_case_id,
        )}</a>
        <span class="authority">authority ${expansion.score.toFixed(3)}</span>
      </li>`,
    )
    .join("");
  return `<section class="expansions"><h3>Cited-case expansions</h3><ol>${items}</ol></section>`;
}

export function renderResults(response: QueryResponse): string {
  const cards = response.results.map((result) => renderResultCard(result, response.weights));
  return `
  <section class="results">
    ${cards.join("\n")}
    ${expansionsHtml(response.expansions)}
  </section>`;
}

export function renderErrorBanner(status: number, body: string): string {
  return `
  <div class="error-banner" role="alert">
    <strong>Request failed (${status})</strong>
    <pre>${escapeHtml(body)}</pre>
  </div>`;
}

export function renderHistory(history: HistoryEntry[], pinned: number[]): string {
  if (history.length === 0) {
    return '<p class="hint">No runs yet.</p>';
  }
  const items = history
    .map((entry) => {
      const w = entry.request.weights;
      const checked = pinned.includes(entry.id) ? "checked" : "";
      return `
      <li>
        <label>
          <input type="checkbox" data-history-id="${entry.id}" ${checked}>
          run ${entry.id}: k=${entry.request.k} n=${entry.request.n}
          w=(${w.w_text.toFixed(2)}, ${w.w_cit.toFixed(2)}, ${w.w_court.toFixed(2)})
          "${escapeHtml(entry.request.text.slice(0, 48))}${entry.request.text.length > 48 ? "…" : ""}"
        </label>
      </li>`;
    })
    .join("");
  return `<ul class="history">${items}</ul>`;
}

const MARKER_GLYPHS: Record<string, string> = {
  same: "=",
  up: "▲",
  down: "▼",
  entered: "entered top-k",
  left: "left top-k",
};

export function renderCompare(view: CompareView): string {
  const rows = view.rows
    .map(
      (row) => `
      <tr class="marker-${row.marker}">
        <td>${escapeHtml(row.case_name)}</td>
        <td>${row.leftRank ?? "—"}</td>
        <td>${row.leftFused === null ? "—" : row.leftFused.toFixed(3)}</td>
        <td>${row.rightRank ?? "—"}</td>
        <td>${row.rightFused === null ? "—" : row.rightFused.toFixed(3)}</td>
        <td class="marker" data-marker="${row.marker}">${MARKER_GLYPHS[row.marker]}</td>
      </tr>`,
    )
    .join("");
  return `
  <table class="compare">
    <thead>
      <tr>
        <th>case</th>
        <th colspan="2">A ${escapeHtml(view.leftLabel)}</th>
        <th colspan="2">B ${escapeHtml(view.rightLabel)}</th>
        <th>change</th>
      </tr>
    </thead>
    <tbody>${rows}</tbody>
  </table>
  <p class="hint">${view.rankChanges} rank change(s)</p>`;
}
