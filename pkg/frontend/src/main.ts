import { Client } from "./api.js";
import { App } from "./app.js";
import { loadPalette, newSession, openDocument } from "./controller.js";

async function boot(): Promise<void> {
  const mount = document.getElementById("app");
  if (!mount) throw new Error("missing #app mount point");
  const session = newSession(new Client(""));
  const app = new App(session, mount);
  await loadPalette(session);
  const id = window.location.hash.replace(/^#/, "");
  if (id) {
    await openDocument(session, id);
  }
  app.draw();
}

void boot();
