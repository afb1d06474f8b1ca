// Thin DOM bindings: descriptors in, elements out. All behavior lives in the
// panel/view models so it stays testable without a browser.

import type { PanelModel } from "./panel.js";
import type { StudentView } from "./view.js";
import type { UiSession } from "./session.js";

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text = "",
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== "") {
    node.textContent = text;
  }
  return node;
}

function statusLine(session: UiSession): string {
  const who = session.clientId ? `${session.clientId} (${session.role})` : "connecting";
  return `${who} — room ${session.room ?? "-"} — ${session.status}`;
}

function renderRoster(session: UiSession, container: HTMLElement): void {
  container.replaceChildren();
  const list = el("ul", { class: "roster" });
  for (const [clientId, entry] of session.roster) {
    const pos = entry.position ? ` @ (${entry.position.map((c) => c.toFixed(1)).join(", ")})` : "";
    list.append(el("li", {}, `${entry.name ?? clientId} [${entry.role ?? "?"}]${pos}`));
  }
  container.append(list);
}

export function mountPanel(panel: PanelModel, root: HTMLElement): void {
  const session = panel.session;
  const status = el("p", { class: "status" });
  const controlsBox = el("div", { class: "controls" });
  const stateBox = el("pre", { class: "state" });
  const rosterBox = el("div", { class: "roster-box" });
  const errorBox = el("p", { class: "errors" });
  root.replaceChildren(status, controlsBox, stateBox, rosterBox, errorBox);

  for (const control of panel.controls) {
    const row = el("div", { class: "control-row" });
    const inputs: Record<string, HTMLInputElement> = {};
    for (const param of control.params) {
      const input = el("input", { placeholder: param, "data-param": param });
      inputs[param] = input;
      row.append(input);
    }
    const button = el("button", { "data-control": control.id }, control.label);
    button.disabled = !control.enabled;
    button.addEventListener("click", () => {
      const args: Record<string, unknown> = {};
      for (const [param, input] of Object.entries(inputs)) {
        args[param] = input.value;
      }
      control.activate(args);
    });
    row.append(button);
    controlsBox.append(row);
  }

  session.onChange = () => {
    status.textContent = statusLine(session);
    stateBox.textContent = JSON.stringify(session.state, null, 1);
    renderRoster(session, rosterBox);
  };
  session.onError = (error) => {
    errorBox.textContent = `${error.code}: ${error.detail}`;
  };
}

export function mountView(view: StudentView, root: HTMLElement): void {
  const session = view.session;
  const status = el("p", { class: "status" });
  const content = el("pre", { class: "bound-app" });
  const rosterBox = el("div", { class: "roster-box" });
  root.replaceChildren(status, content, rosterBox);

  const repaint = (): void => {
    status.textContent =
      view.status === "snapshot-loading" ? "loading snapshot..." : statusLine(session);
    content.textContent = JSON.stringify(view.rendered?.content ?? {}, null, 1);
    renderRoster(session, rosterBox);
  };
  const modelOnChange = session.onChange;
  session.onChange = () => {
    modelOnChange?.();
    repaint();
  };
  repaint();
}
