/** Browser wiring: one input line, one scrollback pane. */

import { ApiClient } from "./api.js";
import { ConsoleState, freshConsole, submit } from "./console.js";
import type { View } from "./render.js";

function viewElement(view: View): HTMLElement {
  switch (view.kind) {
    case "table": {
      const table = document.createElement("table");
      const head = table.createTHead().insertRow();
      for (const column of view.columns) {
        const th = document.createElement("th");
        th.textContent = column;
        head.appendChild(th);
      }
      const body = table.createTBody();
      for (const cells of view.rows) {
        const row = body.insertRow();
        for (const cell of cells) row.insertCell().textContent = cell;
      }
      return table;
    }
    case "timeline": {
      const list = document.createElement("ol");
      list.className = "timeline";
      for (const step of view.steps) {
        const item = document.createElement("li");
        item.textContent = step.atoms.length ? step.atoms.join(", ") : "(empty)";
        list.appendChild(item);
      }
      return list;
    }
    case "bindings": {
      const list = document.createElement("dl");
      for (const entry of view.entries) {
        const dt = document.createElement("dt");
        dt.textContent = entry.variable;
        const dd = document.createElement("dd");
        dd.textContent = entry.individual;
        list.append(dt, dd);
      }
      return list;
    }
    case "position": {
      const p = document.createElement("p");
      p.textContent = `violated at step ${view.index + 1}`;
      return p;
    }
    case "raw": {
      const pre = document.createElement("pre");
      pre.textContent = view.json;
      return pre;
    }
  }
}

export function mountConsole(root: HTMLElement, baseUrl: string): void {
  const client = new ApiClient(baseUrl);
  const scrollback = document.createElement("div");
  scrollback.className = "scrollback";
  const form = document.createElement("form");
  const input = document.createElement("input");
  input.placeholder = "type a command, e.g. help";
  input.autofocus = true;
  form.appendChild(input);
  root.append(scrollback, form);

  let state: ConsoleState | null = null;
  client.createSession().then((session) => {
    state = freshConsole(session);
  });

  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    if (!state || state.pending || !input.value.trim()) return;
    const command = input.value;
    input.value = "";
    input.disabled = true;
    await submit(state, client, command);
    input.disabled = false;
    input.focus();
    renderLastBlock();
  });

  function renderLastBlock(): void {
    if (!state) return;
    const block = state.scrollback[state.scrollback.length - 1];
    if (!block) return;
    const section = document.createElement("section");
    section.className = "block";
    const command = document.createElement("div");
    command.className = "command";
    command.textContent = `> ${block.command}`;
    const badge = document.createElement("span");
    badge.className = `badge badge-${block.rendered.badge}`;
    badge.textContent = block.rendered.badge;
    const text = document.createElement("p");
    text.textContent = block.rendered.text;
    section.append(command, badge, text);
    for (const view of block.rendered.views) {
      section.appendChild(viewElement(view));
    }
    scrollback.appendChild(section);
    section.scrollIntoView({ block: "end" });
  }
}
