/** View-model helpers for the repository and technique pages. */

import type { ArtifactEntry } from "./types.js";

export interface ProvenanceNode {
  entry: ArtifactEntry;
  children: ProvenanceNode[];
}

/** Arrange entries into provenance trees (source_id edges form a forest);
 * roots and children are ordered oldest first for stable rendering. */
export function provenanceForest(entries: ArtifactEntry[]): ProvenanceNode[] {
  const byId = new Map<string, ProvenanceNode>();
  for (const entry of entries) {
    byId.set(entry.id, { entry, children: [] });
  }
  const roots: ProvenanceNode[] = [];
  const ordered = [...entries].sort(
    (a, b) => a.created_at.localeCompare(b.created_at) || a.id.localeCompare(b.id),
  );
  for (const entry of ordered) {
    const node = byId.get(entry.id)!;
    const parent = entry.source_id ? byId.get(entry.source_id) : undefined;
    if (parent) parent.children.push(node);
    else roots.push(node);
  }
  return roots;
}

/** Artifacts produced this session, grouped per technique for the
 * "Outputs" panels. */
export class SessionOutputs {
  private byTechnique = new Map<string, ArtifactEntry[]>();

  record(technique: string, entry: ArtifactEntry): void {
    const list = this.byTechnique.get(technique) ?? [];
    list.push(entry);
    this.byTechnique.set(technique, list);
  }

  outputs(technique: string): ArtifactEntry[] {
    return [...(this.byTechnique.get(technique) ?? [])];
  }
}
