// Instructor control panel model.
//
// Every control is a descriptor the DOM layer renders mechanically: `enabled`
// becomes the button's disabled attribute, `activate` its click handler. Each
// activation of a mutating control emits exactly one ACTION message; when the
// session's role is "student" every mutating control is disabled and
// `activate` is a no-op, so no student UI path can emit an ACTION.

import type { UiSession } from "./session.js";

export interface Control {
  id: string;
  label: string;
  /** True when activation would emit an ACTION message. */
  mutating: boolean;
  enabled: boolean;
  /** Argument names the DOM layer should collect from inputs, if any. */
  params: string[];
  activate(args?: Record<string, unknown>): void;
}

export interface PanelModel {
  session: UiSession;
  controls: Control[];
  control(id: string): Control;
}

function str(args: Record<string, unknown> | undefined, key: string, fallback: string): string {
  const value = args?.[key];
  return typeof value === "string" && value !== "" ? value : fallback;
}

function int(args: Record<string, unknown> | undefined, key: string, fallback: number): number {
  const value = Number(args?.[key]);
  return Number.isInteger(value) ? value : fallback;
}

export function buildPanel(session: UiSession): PanelModel {
  const instructor = session.role === "instructor";

  const mutating = (
    id: string,
    label: string,
    params: string[],
    send: (args?: Record<string, unknown>) => void,
  ): Control => ({
    id,
    label,
    mutating: true,
    enabled: instructor,
    params,
    activate(args?: Record<string, unknown>): void {
      if (!instructor) {
        return; // disabled controls never reach the wire
      }
      send(args);
    },
  });

  const controls: Control[] = [
    mutating("select-deck", "Select deck", ["deck_id", "deck_length"], (args) =>
      session.sendAction("slides", "SELECT_DECK", {
        deck_id: str(args, "deck_id", "deck-1"),
        deck_length: int(args, "deck_length", 10),
      }),
    ),
    mutating("next-slide", "Next slide", [], () => session.sendAction("slides", "NEXT_SLIDE")),
    mutating("prev-slide", "Previous slide", [], () => session.sendAction("slides", "PREV_SLIDE")),
    mutating("goto-slide", "Go to slide", ["index"], (args) =>
      session.sendAction("slides", "GOTO_SLIDE", { index: int(args, "index", 0) }),
    ),
    mutating("next-prompt", "Next prompt", ["prompt_id"], (args) =>
      session.sendAction("faceoff", "NEXT_PROMPT", { prompt_id: str(args, "prompt_id", `p${Date.now()}`) }),
    ),
    mutating("reveal", "Reveal", [], () => session.sendAction("faceoff", "REVEAL")),
    mutating("award-point", "Award point", ["student_id"], (args) =>
      session.sendAction("faceoff", "AWARD_POINT", { student_id: str(args, "student_id", "") }),
    ),
    mutating("reset-game", "Reset game", [], () => session.sendAction("faceoff", "RESET")),
    mutating("lock-pods", "Lock pods", [], () => session.sendAction("pods", "LOCK")),
    mutating("unlock-pods", "Unlock pods", [], () => session.sendAction("pods", "UNLOCK")),
    mutating("assign-groups", "Assign groups", ["assignment"], (args) => {
      const assignment = args?.["assignment"];
      session.sendAction("groups", "ASSIGN", {
        assignment: typeof assignment === "object" && assignment !== null ? assignment : {},
      });
    }),
    mutating("clear-groups", "Clear groups", [], () => session.sendAction("groups", "CLEAR")),
    {
      id: "teleport",
      label: "Teleport to lesson",
      mutating: false, // LEAVE + JOIN, not an ACTION
      enabled: true,
      params: ["room"],
      activate(args?: Record<string, unknown>): void {
        const room = str(args, "room", "");
        if (room !== "") {
          session.teleport(room);
        }
      },
    },
  ];

  return {
    session,
    controls,
    control(id: string): Control {
      const found = controls.find((c) => c.id === id);
      if (found === undefined) {
        throw new Error(`no control '${id}'`);
      }
      return found;
    },
  };
}
