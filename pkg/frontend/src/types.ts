/** Wire types of the dialogue service. */

export type ReplyKind = "ok" | "verdict" | "decision" | "bias_report" | "error";

export interface Reply {
  kind: ReplyKind;
  payload: Record<string, unknown>;
  humanText: string;
  detail: string;
}

export interface StructureWitness {
  kind: "structure";
  individuals: string[];
  predicates: Record<string, string[]>;
  functions: Record<string, Record<string, number>>;
}

export interface TraceWitness {
  kind: "trace";
  trace: string[][];
}

export interface AssignmentWitness {
  kind: "assignment";
  bindings: Record<string, string>;
}

export interface PositionWitness {
  kind: "position";
  index: number;
}

export type Witness =
  | StructureWitness
  | TraceWitness
  | AssignmentWitness
  | PositionWitness;

export interface Violation {
  x: string;
  y: string;
  scoreX: number;
  scoreY: number;
}
