import { describe, expect, it } from "vitest";

import { deriveCards, EventView, StateView } from "../src/model.js";

function view(events: Partial<EventView>[], accepting = true): StateView {
  return {
    sessionId: "t",
    accepting,
    marking: { executed: [], pending: [], included: [] },
    events: events.map((partial, i) => ({
      id: partial.id ?? `e${i}`,
      action: partial.action ?? partial.id ?? `e${i}`,
      roles: partial.roles ?? [],
      executed: partial.executed ?? false,
      pending: partial.pending ?? false,
      included: partial.included ?? true,
      enabled: partial.enabled ?? false,
      blockingConditions: partial.blockingConditions ?? [],
    })),
    history: [],
    principals: { Peter: ["Doctor"], Ann: ["Nurse"] },
    graph: {
      events: events.map((partial, i) => partial.id ?? `e${i}`),
      labels: {},
      conditions: [],
      responses: [],
      includes: [],
      excludes: [],
    },
  };
}

describe("deriveCards", () => {
  it("marks included-but-disabled events as blocked with the blocking set", () => {
    const cards = deriveCards(
      view([{ id: "s", enabled: false, blockingConditions: ["pm"] }]),
      null,
    );
    expect(cards[0]!.blocked).toBe(true);
    expect(cards[0]!.hint).toBe("blocked by pm");
  });

  it("marks excluded events as dashed, not blocked", () => {
    const cards = deriveCards(view([{ id: "gm", included: false, pending: true }]), null);
    expect(cards[0]!.included).toBe(false);
    expect(cards[0]!.blocked).toBe(false);
    expect(cards[0]!.pending).toBe(true);
    expect(cards[0]!.hint).toBe("excluded");
  });

  it("gates clickability by the principal's roles from the view", () => {
    const base = [{ id: "pm", roles: ["Doctor"], enabled: true }];
    expect(deriveCards(view(base), "Peter")[0]!.enabledForCurrentPrincipal).toBe(true);
    const forAnn = deriveCards(view(base), "Ann")[0]!;
    expect(forAnn.enabledForCurrentPrincipal).toBe(false);
    expect(forAnn.hint).toBe("requires Doctor");
    expect(deriveCards(view(base), null)[0]!.hint).toBe("pick a principal first");
  });

  it("keeps executed and pending icons independent", () => {
    const cards = deriveCards(
      view([{ id: "s", executed: true, pending: true, enabled: true }]),
      null,
    );
    expect(cards[0]!.executed).toBe(true);
    expect(cards[0]!.pending).toBe(true);
    expect(cards[0]!.blocked).toBe(false);
  });
});
