// Read-only student lesson view.
//
// Renders the bound app's sub-state and re-renders only on relevant events
// (the bound app's own, or the room-wide pods/groups apps). Irrelevant events
// still reach the session's full mirror — an event for another app cannot
// change the bound sub-state, which is what keeps filtering and full
// application observationally identical — but they do not touch the rendered
// output at all.

import type { EventMsg } from "./protocol.js";
import { isRelevant, type RoomState } from "./state.js";
import type { UiSession } from "./session.js";

export interface RenderedView {
  binding: string;
  content: unknown;
}

export function renderBoundApp(state: RoomState, binding: string): RenderedView {
  let content: unknown;
  if (binding === "slides") {
    content = { ...state.apps.slides };
  } else if (binding === "faceoff") {
    content = { ...state.apps.faceoff, scores: { ...state.apps.faceoff.scores } };
  } else if (binding === "pods") {
    content = { locked: state.pods_locked };
  } else {
    content = { assignment: { ...state.group_assignment } };
  }
  return { binding, content };
}

export class StudentView {
  readonly binding: string;
  /** "snapshot-loading" until the join snapshot lands. */
  status: "snapshot-loading" | "live" = "snapshot-loading";
  rendered: RenderedView | null = null;
  renderCount = 0;

  constructor(readonly session: UiSession) {
    this.binding = session.binding;
    session.onEvent = (event: EventMsg) => this.noteEvent(event);
    session.onChange = () => {
      if (this.status === "snapshot-loading" && session.status === "joined") {
        this.status = "live";
        this.render();
      }
    };
    if (session.status === "joined") {
      this.status = "live";
      this.render();
    }
  }

  private noteEvent(event: EventMsg): void {
    if (this.status === "live" && isRelevant(event.app, this.binding)) {
      this.render();
    }
  }

  private render(): void {
    this.rendered = renderBoundApp(this.session.state, this.binding);
    this.renderCount += 1;
  }
}
