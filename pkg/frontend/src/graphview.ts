// SVG renderer for a Scene. Renders exactly the scene's nodes and edges
// (data-node-id / data-edge-key attributes expose them for inspection) with
// visible edge labels and kind-colored nodes.

import { computeLayout } from "./force.js";
import type { Scene, SceneNode } from "./viewmodel.js";

const SVG_NS = "http://www.w3.org/2000/svg";

export interface GraphViewCallbacks {
  onNodeClick?: (node: SceneNode) => void;
}

export class GraphView {
  private container: HTMLElement;
  private callbacks: GraphViewCallbacks;

  constructor(container: HTMLElement, callbacks: GraphViewCallbacks = {}) {
    this.container = container;
    this.callbacks = callbacks;
  }

  render(scene: Scene): void {
    this.container.textContent = "";
    if (scene.nodes.length === 0) {
      const placeholder = document.createElement("p");
      placeholder.className = "placeholder";
      placeholder.textContent = "no results";
      this.container.appendChild(placeholder);
      return;
    }
    const width = Math.max(this.container.clientWidth, 480);
    const height = Math.max(this.container.clientHeight, 420);
    const positions = computeLayout(scene, width, height);

    const svg = document.createElementNS(SVG_NS, "svg");
    svg.setAttribute("viewBox", `0 0 ${width} ${height}`);
    svg.classList.add("graph-svg");

    for (const edge of scene.edges) {
      const a = positions.get(edge.src)!;
      const b = positions.get(edge.dst)!;
      const line = document.createElementNS(SVG_NS, "line");
      line.setAttribute("x1", String(a.x));
      line.setAttribute("y1", String(a.y));
      line.setAttribute("x2", String(b.x));
      line.setAttribute("y2", String(b.y));
      line.setAttribute("data-edge-key", `${edge.src}|${edge.label}|${edge.dst}`);
      line.classList.add("edge");
      svg.appendChild(line);

      const label = document.createElementNS(SVG_NS, "text");
      label.setAttribute("x", String((a.x + b.x) / 2));
      label.setAttribute("y", String((a.y + b.y) / 2 - 4));
      label.classList.add("edge-label");
      label.textContent = edge.label;
      svg.appendChild(label);
    }

    for (const node of scene.nodes) {
      const point = positions.get(node.id)!;
      const group = document.createElementNS(SVG_NS, "g");
      group.classList.add("node");
      group.setAttribute("data-node-id", node.id);
      group.setAttribute("data-node-kind", node.kind);

      const circle = document.createElementNS(SVG_NS, "circle");
      circle.setAttribute("cx", String(point.x));
      circle.setAttribute("cy", String(point.y));
      circle.setAttribute("r", node.kind === "Entity" ? "14" : "10");
      circle.setAttribute("fill", node.color);
      group.appendChild(circle);

      const text = document.createElementNS(SVG_NS, "text");
      text.setAttribute("x", String(point.x));
      text.setAttribute("y", String(point.y - 16));
      text.classList.add("node-label");
      text.textContent = node.name;
      group.appendChild(text);

      group.addEventListener("click", () => this.callbacks.onNodeClick?.(node));
      svg.appendChild(group);
    }
    this.container.appendChild(svg);
  }
}
