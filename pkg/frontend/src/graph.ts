/** Network explorer model: neighborhood accumulation plus a small
 * force-directed layout. Rendering is separate (views.ts); everything here
 * is pure and unit-testable.
 */

import type { ResultTable } from "./types.js";

export interface GraphNode {
  id: string;
  label: string;
  caption: string;
  expanded: boolean;
  highlighted: boolean;
  x: number;
  y: number;
  vx: number;
  vy: number;
}

export interface GraphLink {
  source: string;
  target: string;
  type: string;
}

interface EdgeCell {
  kind: "edge";
  type: string;
  src: string;  // "Label:ID"
  dst: string;
}

interface NodeCell {
  kind: "node";
  label: string;
  id: string;
  props: Record<string, unknown>;
}

export class GraphModel {
  readonly nodes = new Map<string, GraphNode>();
  readonly links = new Map<string, GraphLink>();

  addNode(id: string, label: string, caption = ""): GraphNode {
    let node = this.nodes.get(id);
    if (!node) {
      const angle = this.nodes.size * 2.399963;  // golden-angle spiral
      const radius = 30 + 14 * Math.sqrt(this.nodes.size);
      node = {
        id, label, caption: caption || id, expanded: false,
        highlighted: false,
        x: 300 + radius * Math.cos(angle),
        y: 240 + radius * Math.sin(angle),
        vx: 0, vy: 0,
      };
      this.nodes.set(id, node);
    }
    return node;
  }

  /** Ingest rows of `RETURN r, n` (edge cell, node cell) around a center.
   * Only edges whose type passes the filter are added; expansion is always
   * an explicit caller action. */
  addNeighborhood(centerId: string, centerLabel: string, table: ResultTable,
                  edgeTypes?: Set<string>): number {
    this.addNode(centerId, centerLabel).expanded = true;
    let added = 0;
    for (const row of table.rows) {
      const edge = row[0] as EdgeCell;
      const far = row[1] as NodeCell;
      if (!edge || edge.kind !== "edge" || !far || far.kind !== "node") {
        continue;
      }
      if (edgeTypes && edgeTypes.size && !edgeTypes.has(edge.type)) {
        continue;
      }
      const caption = typeof far.props.name === "string"
        ? `${far.id} ${far.props.name}` : far.id;
      this.addNode(far.id, far.label, caption);
      const key = `${edge.type}|${edge.src}|${edge.dst}`;
      if (!this.links.has(key)) {
        this.links.set(key, {
          source: edge.src.split(":")[1],
          target: edge.dst.split(":")[1],
          type: edge.type,
        });
        added++;
      }
    }
    return added;
  }

  highlight(ids: Iterable<string>): void {
    for (const node of this.nodes.values()) {
      node.highlighted = false;
    }
    for (const id of ids) {
      const node = this.nodes.get(id);
      if (node) {
        node.highlighted = true;
      }
    }
  }

  clear(): void {
    this.nodes.clear();
    this.links.clear();
  }
}

/** Plain spring-electric layout; a few dozen iterations settle small
 * neighborhoods without any rendering dependency. */
export function runLayout(model: GraphModel, iterations = 120,
                          width = 640, height = 480): void {
  const nodes = [...model.nodes.values()];
  const links = [...model.links.values()]
    .map((link) => ({
      a: model.nodes.get(link.source),
      b: model.nodes.get(link.target),
    }))
    .filter((pair): pair is { a: GraphNode; b: GraphNode } =>
      Boolean(pair.a && pair.b));
  const repulsion = 2600;
  const springLength = 80;
  const springK = 0.04;
  for (let round = 0; round < iterations; round++) {
    const damping = 0.85 - (0.4 * round) / iterations;
    for (let i = 0; i < nodes.length; i++) {
      for (let j = i + 1; j < nodes.length; j++) {
        const a = nodes[i];
        const b = nodes[j];
        const dx = a.x - b.x;
        const dy = a.y - b.y;
        const dist2 = Math.max(dx * dx + dy * dy, 25);
        const force = repulsion / dist2;
        const norm = Math.sqrt(dist2);
        a.vx += (dx / norm) * force;
        a.vy += (dy / norm) * force;
        b.vx -= (dx / norm) * force;
        b.vy -= (dy / norm) * force;
      }
    }
    for (const { a, b } of links) {
      const dx = b.x - a.x;
      const dy = b.y - a.y;
      const dist = Math.max(Math.sqrt(dx * dx + dy * dy), 1);
      const force = springK * (dist - springLength);
      a.vx += (dx / dist) * force;
      a.vy += (dy / dist) * force;
      b.vx -= (dx / dist) * force;
      b.vy -= (dy / dist) * force;
    }
    for (const node of nodes) {
      node.x = Math.min(width - 20, Math.max(20, node.x + node.vx * damping));
      node.y = Math.min(height - 20, Math.max(20, node.y + node.vy * damping));
      node.vx = 0;
      node.vy = 0;
    }
  }
}
