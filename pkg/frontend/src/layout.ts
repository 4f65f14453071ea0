import type { LatticeDoc } from "./types.js";

export interface LayoutNode {
  index: number;
  x: number;
  y: number;
  extent: string[];
  intent: string[];
}

export interface LayoutEdge {
  lower: number;
  upper: number;
}

export interface LatticeLayout {
  width: number;
  height: number;
  nodes: LayoutNode[];
  edges: LayoutEdge[];
}

/**
 * Layered layout of the served Hasse diagram: rank = intent size (top concept
 * on the first layer), nodes kept in the server's canonical order within a
 * layer. Pure positioning over served data, no lattice math.
 */
export function layoutLattice(doc: LatticeDoc, width = 640, rowHeight = 88): LatticeLayout {
  const sizes = doc.concepts.map((c) => c.intent.length);
  const distinct = [...new Set(sizes)].sort((a, b) => a - b);
  const rankOf = new Map(distinct.map((size, rank) => [size, rank]));

  const byRank = new Map<number, number[]>();
  doc.concepts.forEach((_, index) => {
    const rank = rankOf.get(sizes[index])!;
    const bucket = byRank.get(rank);
    if (bucket) {
      bucket.push(index);
    } else {
      byRank.set(rank, [index]);
    }
  });

  const height = Math.max(1, distinct.length) * rowHeight;
  const nodes: LayoutNode[] = doc.concepts.map((c, index) => {
    const rank = rankOf.get(sizes[index])!;
    const row = byRank.get(rank)!;
    const slot = row.indexOf(index);
    return {
      index,
      x: ((slot + 1) * width) / (row.length + 1),
      y: rowHeight / 2 + rank * rowHeight,
      extent: c.extent,
      intent: c.intent,
    };
  });

  const edges: LayoutEdge[] = doc.hasse.map(([lower, upper]) => ({ lower, upper }));
  return { width, height, nodes, edges };
}
