/**
 * Types mirroring the simulation service's JSON payloads, and the card
 * derivation the renderer works from.
 *
 * The client never evaluates relations itself: every flag on a card is a
 * pure function of the service's state view (plus the chosen principal,
 * resolved through the view's own principal-role map).
 */

export interface EventView {
  id: string;
  action: string;
  roles: string[];
  executed: boolean;
  pending: boolean;
  included: boolean;
  enabled: boolean;
  blockingConditions: string[];
}

export interface HistoryEntry {
  event: string;
  action: string;
  principal: string | null;
  role: string | null;
}

export interface GraphView {
  events: string[];
  labels: Record<string, string>;
  conditions: [string, string][];
  responses: [string, string][];
  includes: [string, string][];
  excludes: [string, string][];
}

export interface StateView {
  sessionId: string;
  accepting: boolean;
  marking: { executed: string[]; pending: string[]; included: string[] };
  events: EventView[];
  history: HistoryEntry[];
  principals: Record<string, string[]>;
  graph: GraphView;
}

export interface EventCardView {
  id: string;
  action: string;
  roles: string[];
  /** small check icon: the event has been executed */
  executed: boolean;
  /** small exclamation icon: the event is owed as a response */
  pending: boolean;
  /** small no-entry icon: included but held back by unmet conditions */
  blocked: boolean;
  /** solid border when included, dashed when excluded */
  included: boolean;
  enabledForCurrentPrincipal: boolean;
  blockingConditions: string[];
  /** tooltip text explaining why the card is not clickable, if it is not */
  hint: string | null;
}

export function deriveCards(view: StateView, principal: string | null): EventCardView[] {
  const held = principal ? view.principals[principal] ?? [] : [];
  return view.events.map((event) => {
    const authorized = event.roles.some((role) => held.includes(role));
    const clickable = event.enabled && principal !== null && authorized;
    let hint: string | null = null;
    if (!event.included) {
      hint = "excluded";
    } else if (!event.enabled) {
      hint = `blocked by ${event.blockingConditions.join(", ")}`;
    } else if (principal === null) {
      hint = "pick a principal first";
    } else if (!authorized) {
      hint = `requires ${event.roles.join(" or ") || "no assigned role"}`;
    }
    return {
      id: event.id,
      action: event.action,
      roles: event.roles,
      executed: event.executed,
      pending: event.pending,
      blocked: event.included && !event.enabled,
      included: event.included,
      enabledForCurrentPrincipal: clickable,
      blockingConditions: event.blockingConditions,
      hint,
    };
  });
}
