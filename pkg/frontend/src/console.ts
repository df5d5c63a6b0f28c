/** Console state machine: command in, rendered block out.
 *
 * The scrollback mirrors the server transcript one block per settled
 * command, and at most one command is in flight per session at a time.
 */

import { ApiClient } from "./api.js";
import { renderReply, RenderedReply } from "./render.js";
import type { Reply } from "./types.js";

export interface ScrollbackBlock {
  command: string;
  rendered: RenderedReply;
}

export interface ConsoleState {
  session: string;
  laws: string[];
  cases: string[];
  inputBuffer: string;
  scrollback: ScrollbackBlock[];
  pending: boolean;
}

export function freshConsole(session: string): ConsoleState {
  return {
    session,
    laws: [],
    cases: [],
    inputBuffer: "",
    scrollback: [],
    pending: false,
  };
}

function trackListings(state: ConsoleState, command: string, reply: Reply): void {
  if (reply.kind !== "ok") return;
  const tokens = command.trim().split(/\s+/);
  if ((tokens[0] === "deflaw" || (tokens[0] === "load" && tokens[1] === "law"))) {
    const name = tokens[0] === "deflaw" ? tokens[1] : tokens[2];
    if (name && !state.laws.includes(name)) state.laws.push(name);
  }
  if ((tokens[0] === "defcase" || (tokens[0] === "load" && tokens[1] === "case"))) {
    const name = tokens[0] === "defcase" ? tokens[1] : tokens[2];
    if (name && !state.cases.includes(name)) state.cases.push(name);
  }
}

/** Send one command; resolves to the state with the settled block appended.
 * Rejects a submit while another command is pending. */
export async function submit(
  state: ConsoleState,
  client: ApiClient,
  commandText: string,
): Promise<ConsoleState> {
  if (state.pending) {
    throw new Error("a command is already pending for this session");
  }
  state.pending = true;
  state.inputBuffer = "";
  try {
    const reply = await client.sendCommand(state.session, commandText);
    trackListings(state, commandText, reply);
    state.scrollback.push({ command: commandText, rendered: renderReply(reply) });
  } catch (err) {
    // transport-level failure: surface inline, invent nothing
    state.scrollback.push({
      command: commandText,
      rendered: {
        badge: "error",
        text: `network error: ${err instanceof Error ? err.message : String(err)}`,
        views: [],
      },
    });
  } finally {
    state.pending = false;
  }
  return state;
}
