/** Session state shared by the pages. */

import { Api } from "./api.js";
import { SessionOutputs } from "./repo_model.js";
import type { ArtifactEntry } from "./types.js";

export class AppState {
  readonly api = new Api();
  readonly outputs = new SessionOutputs();
  entries: ArtifactEntry[] = [];
  selection: ArtifactEntry | null = null;

  async refresh(): Promise<ArtifactEntry[]> {
    this.entries = await this.api.list();
    if (this.selection && !this.entries.some((e) => e.id === this.selection!.id)) {
      this.selection = null;
    }
    return this.entries;
  }

  select(entry: ArtifactEntry | null): void {
    this.selection = entry;
  }
}
