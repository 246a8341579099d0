/**
 * DOM rendering of the graphical notation: one card per event with a role
 * badge box on top, marking icons (check for executed, exclamation for
 * pending, no-entry for condition-blocked), dashed borders for excluded
 * events, and one SVG arrow per relation with a head glyph telling the
 * relation kind apart (dot for condition, arrow for response, plus and
 * percent for include and exclude).
 */

import { CARD_HEIGHT, CARD_WIDTH, Point } from "./layout.js";
import type { EventCardView, GraphView, StateView } from "./model.js";

const ARROW_STYLES: Record<string, { color: string; glyph: string }> = {
  condition: { color: "#d98e04", glyph: "•" },
  response: { color: "#2457a8", glyph: "▸" },
  include: { color: "#2e8b57", glyph: "+" },
  exclude: { color: "#c0392b", glyph: "%" },
};

export interface SceneHandlers {
  onCardClick: (event: string) => void;
  onDragEnd: (event: string, point: Point) => void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

function svgEl(tag: string): SVGElement {
  return document.createElementNS("http://www.w3.org/2000/svg", tag);
}

function edgeAnchors(from: Point, to: Point): { start: Point; end: Point } {
  const fromCenter = { x: from.x + CARD_WIDTH / 2, y: from.y + CARD_HEIGHT / 2 };
  const toCenter = { x: to.x + CARD_WIDTH / 2, y: to.y + CARD_HEIGHT / 2 };
  const dx = toCenter.x - fromCenter.x;
  const dy = toCenter.y - fromCenter.y;
  const length = Math.hypot(dx, dy) || 1;
  const trim = (amount: number, base: Point, sign: number): Point => ({
    x: base.x + (sign * dx * amount) / length,
    y: base.y + (sign * dy * amount) / length,
  });
  return {
    start: trim(CARD_HEIGHT / 2, fromCenter, 1),
    end: trim(CARD_HEIGHT / 2 + 10, toCenter, -1),
  };
}

function drawArrow(
  svg: SVGElement,
  kind: keyof typeof ARROW_STYLES,
  from: Point,
  to: Point,
  selfLoop: boolean,
): void {
  const style = ARROW_STYLES[kind]!;
  if (selfLoop) {
    const cx = from.x + CARD_WIDTH;
    const cy = from.y + 10;
    const path = svgEl("path");
    path.setAttribute(
      "d",
      `M ${cx - 14} ${cy} C ${cx + 26} ${cy - 26}, ${cx + 26} ${cy + 26}, ${cx - 8} ${cy + 14}`,
    );
    path.setAttribute("fill", "none");
    path.setAttribute("stroke", style.color);
    svg.appendChild(path);
    const glyph = svgEl("text");
    glyph.setAttribute("x", String(cx + 20));
    glyph.setAttribute("y", String(cy + 6));
    glyph.setAttribute("fill", style.color);
    glyph.textContent = style.glyph;
    svg.appendChild(glyph);
    return;
  }
  const { start, end } = edgeAnchors(from, to);
  const line = svgEl("line");
  line.setAttribute("x1", String(start.x));
  line.setAttribute("y1", String(start.y));
  line.setAttribute("x2", String(end.x));
  line.setAttribute("y2", String(end.y));
  line.setAttribute("stroke", style.color);
  svg.appendChild(line);
  const glyph = svgEl("text");
  glyph.setAttribute("x", String(end.x));
  glyph.setAttribute("y", String(end.y));
  glyph.setAttribute("fill", style.color);
  glyph.setAttribute("font-size", "14");
  glyph.textContent = style.glyph;
  svg.appendChild(glyph);
}

export function renderScene(
  root: HTMLElement,
  view: StateView,
  cards: EventCardView[],
  positions: Map<string, Point>,
  handlers: SceneHandlers,
): void {
  root.textContent = "";
  const banner = el("div", view.accepting ? "banner accepting" : "banner pending");
  banner.textContent = view.accepting
    ? "accepting: no included event is owed"
    : `not accepting: owed ${view.marking.pending.filter((e) => view.marking.included.includes(e)).join(", ")}`;
  root.appendChild(banner);

  const canvas = el("div", "canvas");
  canvas.style.position = "relative";
  root.appendChild(canvas);

  const svg = svgEl("svg");
  svg.setAttribute("class", "arrows");
  const width = Math.max(...[...positions.values()].map((p) => p.x + CARD_WIDTH), 400) + 60;
  const height = Math.max(...[...positions.values()].map((p) => p.y + CARD_HEIGHT), 240) + 60;
  svg.setAttribute("width", String(width));
  svg.setAttribute("height", String(height));
  canvas.appendChild(svg);

  const graph: GraphView = view.graph;
  const relations: [keyof typeof ARROW_STYLES, [string, string][]][] = [
    ["condition", graph.conditions],
    ["response", graph.responses],
    ["include", graph.includes],
    ["exclude", graph.excludes],
  ];
  for (const [kind, pairs] of relations) {
    for (const [source, target] of pairs) {
      const from = positions.get(source);
      const to = positions.get(target);
      if (from && to) {
        drawArrow(svg, kind, from, to, source === target);
      }
    }
  }

  for (const card of cards) {
    const position = positions.get(card.id);
    if (!position) {
      continue;
    }
    const node = el("div", cardClass(card));
    node.style.left = `${position.x}px`;
    node.style.top = `${position.y}px`;
    node.style.width = `${CARD_WIDTH}px`;
    node.dataset.event = card.id;
    if (card.hint) {
      node.title = card.hint;
    }
    const badge = el("div", "roles", card.roles.join(" "));
    node.appendChild(badge);
    const icons = el("div", "icons");
    if (card.blocked) {
      icons.appendChild(el("span", "icon blocked", "⊘"));
    }
    if (card.executed) {
      icons.appendChild(el("span", "icon executed", "✓"));
    }
    if (card.pending) {
      icons.appendChild(el("span", "icon pending", "!"));
    }
    node.appendChild(icons);
    node.appendChild(el("div", "action", card.action));
    if (card.enabledForCurrentPrincipal) {
      node.addEventListener("click", () => handlers.onCardClick(card.id));
    }
    attachDrag(node, position, (point) => handlers.onDragEnd(card.id, point));
    canvas.appendChild(node);
  }
}

export function cardClass(card: EventCardView): string {
  const classes = ["card"];
  classes.push(card.included ? "included" : "excluded");
  if (card.enabledForCurrentPrincipal) {
    classes.push("clickable");
  }
  return classes.join(" ");
}

function attachDrag(
  node: HTMLElement,
  start: Point,
  commit: (point: Point) => void,
): void {
  let origin: { pointer: Point; card: Point } | null = null;
  let moved = false;
  node.addEventListener("pointerdown", (event) => {
    origin = { pointer: { x: event.clientX, y: event.clientY }, card: { ...start } };
    moved = false;
    node.setPointerCapture(event.pointerId);
  });
  node.addEventListener("pointermove", (event) => {
    if (!origin) {
      return;
    }
    const dx = event.clientX - origin.pointer.x;
    const dy = event.clientY - origin.pointer.y;
    if (Math.abs(dx) + Math.abs(dy) > 4) {
      moved = true;
    }
    node.style.left = `${origin.card.x + dx}px`;
    node.style.top = `${origin.card.y + dy}px`;
  });
  node.addEventListener("pointerup", (event) => {
    if (!origin) {
      return;
    }
    if (moved) {
      commit({
        x: origin.card.x + event.clientX - origin.pointer.x,
        y: origin.card.y + event.clientY - origin.pointer.y,
      });
      // swallow the click that follows a drag
      event.stopPropagation();
    }
    origin = null;
  });
}
