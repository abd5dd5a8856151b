import { describe, expect, it } from "vitest";

import { SessionOutputs, provenanceForest } from "../src/repo_model.js";
import type { ArtifactEntry } from "../src/types.js";

function entry(id: string, source: string | null, created: string): ArtifactEntry {
  return {
    id,
    name: `${id}.xes`,
    kind: "xes",
    created_at: created,
    source_id: source,
    op_count: 0,
    byte_size: 10,
  };
}

describe("provenanceForest", () => {
  it("builds trees from source edges", () => {
    const entries = [
      entry("root", null, "2024-01-01T00:00:00"),
      entry("childA", "root", "2024-01-02T00:00:00"),
      entry("childB", "root", "2024-01-03T00:00:00"),
      entry("grand", "childA", "2024-01-04T00:00:00"),
      entry("lonely", null, "2024-01-05T00:00:00"),
    ];
    const forest = provenanceForest(entries);
    expect(forest.map((n) => n.entry.id)).toEqual(["root", "lonely"]);
    const root = forest[0];
    expect(root.children.map((n) => n.entry.id)).toEqual(["childA", "childB"]);
    expect(root.children[0].children.map((n) => n.entry.id)).toEqual(["grand"]);
  });

  it("treats entries with vanished sources as roots", () => {
    const forest = provenanceForest([entry("orphan", "deleted-id", "2024-01-01T00:00:00")]);
    expect(forest.map((n) => n.entry.id)).toEqual(["orphan"]);
  });
});

describe("SessionOutputs", () => {
  it("groups produced artifacts per technique", () => {
    const outputs = new SessionOutputs();
    outputs.record("tlkc", entry("one", null, "2024-01-01T00:00:00"));
    outputs.record("connector", entry("two", null, "2024-01-02T00:00:00"));
    outputs.record("tlkc", entry("three", null, "2024-01-03T00:00:00"));
    expect(outputs.outputs("tlkc").map((e) => e.id)).toEqual(["one", "three"]);
    expect(outputs.outputs("connector").map((e) => e.id)).toEqual(["two"]);
    expect(outputs.outputs("role-decomposition")).toEqual([]);
  });
});
