/** Deterministic view descriptions for replies and witnesses.
 *
 * Every value shown comes verbatim from the service JSON; rendering never
 * invents or drops a datum. Unknown witness shapes fall back to raw JSON.
 */

import type { Reply, Violation } from "./types.js";

export type View =
  | { kind: "table"; columns: string[]; rows: string[][] }
  | { kind: "timeline"; steps: { index: number; atoms: string[] }[] }
  | { kind: "bindings"; entries: { variable: string; individual: string }[] }
  | { kind: "position"; index: number }
  | { kind: "raw"; json: string };

export interface RenderedReply {
  badge: string; // one-word outcome: holds/fails/valid/sat/biased/error/...
  text: string;
  views: View[];
}

function isRecord(value: unknown): value is Record<string, unknown> {
  return typeof value === "object" && value !== null && !Array.isArray(value);
}

/** Individual-by-attribute table for a structure witness. */
function structureTable(witness: Record<string, unknown>): View | null {
  const individuals = witness["individuals"];
  const predicates = witness["predicates"];
  const functions = witness["functions"];
  if (!Array.isArray(individuals) || !isRecord(predicates) || !isRecord(functions)) {
    return null;
  }
  const predNames = Object.keys(predicates);
  const funcNames = Object.keys(functions);
  const columns = ["individual", ...predNames, ...funcNames];
  const rows = individuals.map((ind) => {
    const row = [String(ind)];
    for (const p of predNames) {
      const extension = predicates[p];
      const member = Array.isArray(extension) && extension.includes(ind);
      row.push(member ? "yes" : "no");
    }
    for (const f of funcNames) {
      const table = functions[f];
      row.push(isRecord(table) ? String(table[String(ind)]) : "?");
    }
    return row;
  });
  return { kind: "table", columns, rows };
}

function traceTimeline(witness: Record<string, unknown>): View | null {
  const trace = witness["trace"];
  if (!Array.isArray(trace)) return null;
  return {
    kind: "timeline",
    steps: trace.map((state, i) => ({
      index: i + 1,
      atoms: Array.isArray(state) ? state.map(String) : [],
    })),
  };
}

export function renderWitness(witness: unknown): View {
  if (isRecord(witness)) {
    switch (witness["kind"]) {
      case "structure": {
        const view = structureTable(witness);
        if (view) return view;
        break;
      }
      case "trace": {
        const view = traceTimeline(witness);
        if (view) return view;
        break;
      }
      case "assignment": {
        const bindings = witness["bindings"];
        if (isRecord(bindings)) {
          return {
            kind: "bindings",
            entries: Object.entries(bindings).map(([variable, individual]) => ({
              variable,
              individual: String(individual),
            })),
          };
        }
        break;
      }
      case "position": {
        const index = witness["index"];
        if (typeof index === "number") return { kind: "position", index };
        break;
      }
    }
  }
  return { kind: "raw", json: JSON.stringify(witness) };
}

function violationsTable(violations: Violation[]): View {
  return {
    kind: "table",
    columns: ["x", "y", "scoreX", "scoreY"],
    rows: violations.map((v) => [v.x, v.y, String(v.scoreX), String(v.scoreY)]),
  };
}

function badgeOf(reply: Reply): string {
  const payload = reply.payload;
  if (reply.kind === "error") return "error";
  if (reply.kind === "verdict") return String(payload["outcome"] ?? "verdict");
  if (reply.kind === "decision") return String(payload["status"] ?? "decision");
  if (reply.kind === "bias_report") return String(payload["outcome"] ?? "audit");
  return "ok";
}

export function renderReply(reply: Reply): RenderedReply {
  const views: View[] = [];
  const witness = reply.payload["witness"];
  if (witness !== undefined && witness !== null) {
    views.push(renderWitness(witness));
  }
  const violations = reply.payload["violations"];
  if (Array.isArray(violations) && violations.length > 0) {
    views.push(violationsTable(violations as Violation[]));
  }
  return { badge: badgeOf(reply), text: reply.humanText, views };
}
