// Pair-authoring state machine. A draft holds at most one half of a pair
// (an image click or a mesh vertex); a pair commits the moment both halves
// exist. Committed pairs mirror the server after every PUT.

import { Pair } from "./schema.js";

export const MIN_PAIRS_FOR_RUN = 4;

export interface Draft {
  pixel: [number, number] | null;
  vertex: number | null;
}

export class PairState {
  pairs: Pair[] = [];
  draft: Draft = { pixel: null, vertex: null };

  clickImage(x: number, y: number): Pair | null {
    this.draft.pixel = [x, y];
    return this.tryCommit();
  }

  clickVertex(vertex: number): Pair | null {
    if (this.pairs.some((p) => p.vertex === vertex)) {
      return null; // vertex ids must stay unique; ignore re-picks
    }
    this.draft.vertex = vertex;
    return this.tryCommit();
  }

  private tryCommit(): Pair | null {
    if (this.draft.pixel === null || this.draft.vertex === null) return null;
    const pair: Pair = { vertex: this.draft.vertex, pixel: this.draft.pixel };
    this.pairs.push(pair);
    this.draft = { pixel: null, vertex: null };
    return pair;
  }

  deletePair(index: number): void {
    if (index >= 0 && index < this.pairs.length) {
      this.pairs.splice(index, 1); // later pairs renumber stably by position
    }
  }

  clearDraft(): void {
    this.draft = { pixel: null, vertex: null };
  }

  get canRun(): boolean {
    return this.pairs.length >= MIN_PAIRS_FOR_RUN;
  }

  get runDisabledReason(): string | null {
    return this.canRun
      ? null
      : `need at least ${MIN_PAIRS_FOR_RUN} pairs (have ${this.pairs.length})`;
  }
}
