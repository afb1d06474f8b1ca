// Browser entry point. URL parameters select the server, room, binding, and
// role: ?server=ws://host:port&room=island&binding=slides&name=Ada&token=...
// A token that the server accepts yields the instructor panel; anything else
// gets the read-only student view.

import { UiSession } from "./session.js";
import { buildPanel } from "./panel.js";
import { StudentView } from "./view.js";
import { mountPanel, mountView } from "./dom.js";

function param(name: string, fallback: string): string {
  return new URLSearchParams(window.location.search).get(name) ?? fallback;
}

const root = document.getElementById("app");
if (root === null) {
  throw new Error("missing #app container");
}

const token = new URLSearchParams(window.location.search).get("token");
const session = new UiSession({
  url: param("server", "ws://127.0.0.1:7601"),
  name: param("name", "browser"),
  room: param("room", "island"),
  binding: param("binding", "slides"),
  token: token ?? undefined,
  digestCheck: param("dev", "") === "1",
});

session.waitUntil(() => session.status === "joined" || session.status === "error", 15_000).then(
  () => {
    if (session.role === "instructor") {
      mountPanel(buildPanel(session), root);
    } else {
      mountView(new StudentView(session), root);
    }
    session.onChange?.();
  },
  () => {
    root.textContent = "connection failed — check server address and room name";
  },
);
