/**
 * Application wiring: session bootstrap, principal selection, a 1 s
 * polling loop that pauses while a mutation is in flight, and click /
 * drag / undo handling.  All semantics come from the service; this file
 * only moves view data around.
 */

import { ApiError, ServiceClient } from "./api.js";
import { Point, positionsFor, saveOverride } from "./layout.js";
import { deriveCards, StateView } from "./model.js";
import { renderScene } from "./render.js";

const DEFAULT_DOCUMENT = {
  events: ["pm", "s", "gm", "dt"],
  labels: {
    pm: "prescribe medicine",
    s: "sign",
    gm: "give medicine",
    dt: "don't trust",
  },
  conditions: [["pm", "s"], ["s", "gm"], ["s", "dt"]],
  responses: [["pm", "s"], ["pm", "gm"], ["dt", "s"]],
  includes: [["s", "gm"]],
  excludes: [["dt", "gm"], ["gm", "dt"]],
  roles: ["Doctor", "Nurse"],
  principals: ["Peter", "Ann"],
  assignments: {
    principals: { Peter: ["Doctor"], Ann: ["Nurse"] },
    actions: {
      "prescribe medicine": ["Doctor"],
      sign: ["Doctor"],
      "give medicine": ["Nurse"],
      "don't trust": ["Nurse"],
    },
  },
};

interface AppState {
  client: ServiceClient;
  view: StateView | null;
  principal: string | null;
  mutationInFlight: boolean;
}

const state: AppState = {
  client: new ServiceClient(resolveBaseUrl()),
  view: null,
  principal: null,
  mutationInFlight: false,
};

function resolveBaseUrl(): string {
  const params = new URLSearchParams(window.location.search);
  return params.get("service") ?? "http://localhost:8080";
}

function byId<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) {
    throw new Error(`missing element #${id}`);
  }
  return node as T;
}

function showError(message: string | null): void {
  const node = byId<HTMLDivElement>("error");
  node.textContent = message ?? "";
  node.style.display = message ? "block" : "none";
}

function redraw(): void {
  if (!state.view) {
    return;
  }
  const view = state.view;
  const selector = byId<HTMLSelectElement>("principal");
  const names = Object.keys(view.principals);
  if (selector.options.length !== names.length + 1) {
    selector.textContent = "";
    selector.appendChild(new Option("choose a principal", ""));
    for (const name of names) {
      selector.appendChild(new Option(`${name} (${view.principals[name]!.join(", ")})`, name));
    }
    selector.value = state.principal ?? "";
  }
  const cards = deriveCards(view, state.principal);
  renderScene(byId("scene"), view, cards, positionsFor(view.graph), {
    onCardClick: clickEvent,
    onDragEnd: (event: string, point: Point) => {
      saveOverride(view.graph, event, point);
      redraw();
    },
  });
  byId<HTMLButtonElement>("undo").disabled = view.history.length === 0;
  byId<HTMLDivElement>("history").textContent = view.history
    .map((entry) => `${entry.principal ?? "?"}: ${entry.action}`)
    .join("  →  ");
}

async function mutate(action: () => Promise<StateView>): Promise<void> {
  if (state.mutationInFlight) {
    return;
  }
  state.mutationInFlight = true;
  try {
    state.view = await action();
    showError(null);
  } catch (error) {
    if (error instanceof ApiError) {
      const blocking = error.blocking.length ? ` (blocked by ${error.blocking.join(", ")})` : "";
      showError(`${error.code}${blocking}`);
    } else {
      showError(String(error));
    }
    // re-fetch so the scene never drifts from the service
    if (state.view) {
      state.view = await state.client.getState(state.view.sessionId);
    }
  } finally {
    state.mutationInFlight = false;
    redraw();
  }
}

function clickEvent(event: string): void {
  if (!state.view || !state.principal) {
    return;
  }
  const sessionId = state.view.sessionId;
  void mutate(() => state.client.executeEvent(sessionId, state.principal!, event));
}

async function startSession(document: unknown): Promise<void> {
  await mutate(() => state.client.createSession(document));
}

function poll(): void {
  window.setInterval(async () => {
    if (!state.view || state.mutationInFlight) {
      return;
    }
    try {
      state.view = await state.client.getState(state.view.sessionId);
      redraw();
    } catch {
      // transient poll failures keep the last scene
    }
  }, 1000);
}

export function boot(): void {
  byId<HTMLSelectElement>("principal").addEventListener("change", (event) => {
    const value = (event.target as HTMLSelectElement).value;
    state.principal = value || null;
    redraw();
  });
  byId<HTMLButtonElement>("undo").addEventListener("click", () => {
    if (state.view) {
      const sessionId = state.view.sessionId;
      void mutate(() => state.client.undo(sessionId));
    }
  });
  byId<HTMLButtonElement>("load").addEventListener("click", () => {
    const text = byId<HTMLTextAreaElement>("document").value.trim();
    try {
      void startSession(text ? JSON.parse(text) : DEFAULT_DOCUMENT);
    } catch (error) {
      showError(`document is not valid JSON: ${error}`);
    }
  });
  byId<HTMLTextAreaElement>("document").value = JSON.stringify(DEFAULT_DOCUMENT, null, 2);
  void startSession(DEFAULT_DOCUMENT);
  poll();
}

boot();
