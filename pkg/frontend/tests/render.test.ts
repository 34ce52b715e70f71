// @vitest-environment jsdom
import { readFileSync } from "node:fs";
import { join } from "node:path";

import { describe, expect, it } from "vitest";

import { compareRuns } from "../src/compare.js";
import { renderCompare, renderErrorBanner, renderResults } from "../src/render.js";
import type { HistoryEntry } from "../src/state.js";
import type { QueryResponse } from "../src/types.js";

function loadResponse(name: string): { request: Record<string, unknown>; response: QueryResponse } {
  return JSON.parse(readFileSync(join(__dirname, "fixtures", `${name}.json`), "utf-8"));
}

const uniform = loadResponse("response_uniform");

function mount(html: string): HTMLElement {
  const host = document.createElement("div");
  host.innerHTML = html;
  document.body.appendChild(host);
  return host;
}

describe("renderResults", () => {
  it("renders k cards in rank order", () => {
    const host = mount(renderResults(uniform.response));
    const cards = host.querySelectorAll(".result-card");
    expect(cards).toHaveLength(uniform.response.k);
    const ranks = [...cards].map((card) => card.querySelector(".rank")!.textContent);
    expect(ranks).toEqual(uniform.response.results.map((r) => `#${r.rank}`));
  });

  it("bar segments sum to the fused score shown on each card", () => {
    const host = mount(renderResults(uniform.response));
    for (const card of host.querySelectorAll(".result-card")) {
      const fused = Number((card as HTMLElement).dataset["fused"]);
      const segments = [...card.querySelectorAll(".bar-segment")];
      expect(segments).toHaveLength(3);
      const total = segments.reduce(
        (sum, segment) => sum + Number((segment as HTMLElement).dataset["contribution"]),
        0,
      );
      expect(Math.abs(total - fused)).toBeLessThanOrEqual(1e-9);
      const shown = Number(card.querySelector(".fused")!.textContent);
      expect(Math.abs(shown - fused)).toBeLessThanOrEqual(5e-4); // display rounds to 3 decimals
    }
  });

  it("links each expansion to its source case card", () => {
    const host = mount(renderResults(uniform.response));
    const links = host.querySelectorAll(".expansions a");
    expect(links.length).toBe(uniform.response.expansions.length);
    for (const [index, link] of [...links].entries()) {
      const source = uniform.response.expansions[index]!.source_case_id;
      expect(link.getAttribute("href")).toBe(`#case-${source}`);
      expect(host.querySelector(`#case-${source}`)).not.toBeNull();
    }
  });

  it("renders factor excerpts from the response only", () => {
    const host = mount(renderResults(uniform.response));
    const firstCard = host.querySelector(".result-card")!;
    const excerptTexts = [...firstCard.querySelectorAll("blockquote")].map(
      (block) => block.textContent,
    );
    const expected = Object.values(uniform.response.results[0]!.excerpts).flat();
    expect(excerptTexts).toEqual(expected);
  });
});

describe("renderErrorBanner", () => {
  it("shows the body verbatim", () => {
    const body = '{"detail": {"weights": "weights must sum to 1, got 1.2"}}';
    const host = mount(renderErrorBanner(400, body));
    expect(host.querySelector(".error-banner pre")!.textContent).toBe(body);
    expect(host.querySelector(".error-banner")!.textContent).toContain("400");
  });

  it("escapes markup in error bodies", () => {
    const host = mount(renderErrorBanner(503, "<script>alert(1)</script>"));
    expect(host.querySelector("script")).toBeNull();
    expect(host.querySelector("pre")!.textContent).toContain("<script>");
  });
});

describe("renderCompare", () => {
  it("renders paired columns with a marker per case", () => {
    const left: HistoryEntry = {
      id: 1,
      request: uniform.request as HistoryEntry["request"],
      response: loadResponse("response_text_only").response,
    };
    const right: HistoryEntry = {
      id: 2,
      request: uniform.request as HistoryEntry["request"],
      response: uniform.response,
    };
    const view = compareRuns(left, right);
    const host = mount(renderCompare(view));
    const rows = host.querySelectorAll("tbody tr");
    expect(rows).toHaveLength(view.rows.length);
    const markers = [...host.querySelectorAll("td.marker")].map(
      (cell) => (cell as HTMLElement).dataset["marker"],
    );
    expect(markers).toEqual(view.rows.map((row) => row.marker));
  });
});
