/**
 * What-if comparison of two runs over the same dispute.
 *
 * Two history entries are comparable when their text, k, and n agree (only
 * the weights differ). Rows pair each case's rank in both runs and carry a
 * marker: same, up, down, or entered/left the top-k.
 */
import type { HistoryEntry } from "./state.js";

export type RankMarker = "same" | "up" | "down" | "entered" | "left";

export interface CompareRow {
  case_id: string;
  case_name: string;
  leftRank: number | null;
  rightRank: number | null;
  leftFused: number | null;
  rightFused: number | null;
  marker: RankMarker;
}

export interface CompareView {
  leftLabel: string;
  rightLabel: string;
  rows: CompareRow[];
  rankChanges: number;
}

export function canCompare(a: HistoryEntry, b: HistoryEntry): boolean {
  return (
    a.request.text === b.request.text && a.request.k === b.request.k && a.request.n === b.request.n
  );
}

function weightsLabel(entry: HistoryEntry): string {
  const { w_text, w_cit, w_court } = entry.request.weights;
  return `(${w_text.toFixed(2)}, ${w_cit.toFixed(2)}, ${w_court.toFixed(2)})`;
}

export function compareRuns(left: HistoryEntry, right: HistoryEntry): CompareView {
  const byCaseLeft = new Map(left.response.results.map((r) => [r.case_id, r]));
  const byCaseRight = new Map(right.response.results.map((r) => [r.case_id, r]));
  const order: string[] = [];
  for (const r of left.response.results) order.push(r.case_id);
  for (const r of right.response.results) if (!byCaseLeft.has(r.case_id)) order.push(r.case_id);

  const rows: CompareRow[] = order.map((caseId) => {
    const l = byCaseLeft.get(caseId);
    const r = byCaseRight.get(caseId);
    let marker: RankMarker;
    if (l && r) {
      marker = l.rank === r.rank ? "same" : r.rank < l.rank ? "up" : "down";
    } else {
      marker = r ? "entered" : "left";
    }
    return {
      case_id: caseId,
      case_name: (l ?? r)!.case_name,
      leftRank: l ? l.rank : null,
      rightRank: r ? r.rank : null,
      leftFused: l ? l.scores.fused : null,
      rightFused: r ? r.scores.fused : null,
      marker,
    };
  });

  return {
    leftLabel: weightsLabel(left),
    rightLabel: weightsLabel(right),
    rows,
    rankChanges: rows.filter((row) => row.marker !== "same").length,
  };
}
