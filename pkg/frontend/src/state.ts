// Workbench state: the loaded project snapshot plus local pending edits.
//
// Pending edits live apart from the persisted pairs so the board can show
// them distinctly; they also survive a refresh (stored per project) and a
// dropped connection. The metric preview is recomputed locally after every
// edit with the same formulas the server uses; a commit sends the effective
// pair set with the revision the snapshot was loaded at, and a 409 answer
// surfaces as a conflict the user resolves by reload-and-replay.

import {
  ConnectionLostError,
  MappingRejectedError,
  RevisionConflictError,
  fetchMetrics,
  fetchProject,
  putMapping,
} from "./api.js";
import { computeReport, LocalReport, PreviousSchemeNodes } from "./metrics.js";
import {
  MetricReportDoc,
  PairKey,
  pairId,
  ProjectDoc,
  samePair,
  SchemeDoc,
  ViolationDoc,
} from "./types.js";

export interface EditResult {
  applied: boolean;
  notice?: string;
}

export type CommitResult =
  | { kind: "committed"; revision: number }
  | { kind: "conflict"; current: number }
  | { kind: "rejected"; violations: ViolationDoc[] }
  | { kind: "offline" }
  | { kind: "clean" }
  | { kind: "invalid"; notice: string };

interface StoredEdits {
  adds: PairKey[];
  removes: PairKey[];
}

export interface StorageLike {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export interface Selection {
  unifiedNodeId: string | null;
  previousSchemeId: string | null;
  previousNodeId: string | null;
}

export class Workbench {
  projectId = "";
  revision = -1;
  project: ProjectDoc | null = null;
  schemes: Record<string, SchemeDoc> = {};
  serverReport: MetricReportDoc | null = null;
  pendingAdds: PairKey[] = [];
  pendingRemoves: PairKey[] = [];
  selection: Selection = {
    unifiedNodeId: null, previousSchemeId: null, previousNodeId: null,
  };
  offline = false;
  lastNotice = "";

  constructor(private readonly base: string,
              private readonly storage: StorageLike) {}

  async load(projectId: string): Promise<void> {
    const snapshot = await this.online(() => fetchProject(this.base, projectId));
    this.projectId = projectId;
    this.project = snapshot.project;
    this.revision = snapshot.project.revision;
    this.schemes = snapshot.schemes;
    this.serverReport = await this.online(() => fetchMetrics(this.base, projectId));
    this.restoreEdits();
  }

  /** Runs one request, maintaining the read-only (offline) flag. */
  private async online<T>(call: () => Promise<T>): Promise<T> {
    try {
      const result = await call();
      this.offline = false;
      return result;
    } catch (error) {
      if (error instanceof ConnectionLostError) {
        this.offline = true;
      }
      throw error;
    }
  }

  private storageKey(): string {
    return `taxunify:pending:${this.projectId}`;
  }

  private persistEdits(): void {
    const edits: StoredEdits = { adds: this.pendingAdds, removes: this.pendingRemoves };
    if (edits.adds.length === 0 && edits.removes.length === 0) {
      this.storage.removeItem(this.storageKey());
    } else {
      this.storage.setItem(this.storageKey(), JSON.stringify(edits));
    }
  }

  private restoreEdits(): void {
    const raw = this.storage.getItem(this.storageKey());
    if (!raw) {
      this.pendingAdds = [];
      this.pendingRemoves = [];
      return;
    }
    try {
      const edits = JSON.parse(raw) as StoredEdits;
      this.pendingAdds = edits.adds ?? [];
      this.pendingRemoves = edits.removes ?? [];
    } catch {
      this.pendingAdds = [];
      this.pendingRemoves = [];
    }
  }

  persistedPairs(): PairKey[] {
    return (this.project?.mapping.pairs ?? []).map((pair) => ({
      unifiedNodeId: pair.unifiedNodeId,
      previousSchemeId: pair.previousSchemeId,
      previousNodeId: pair.previousNodeId,
    }));
  }

  effectivePairs(): PairKey[] {
    const removed = new Set(this.pendingRemoves.map(pairId));
    const pairs = this.persistedPairs().filter((pair) => !removed.has(pairId(pair)));
    const present = new Set(pairs.map(pairId));
    for (const added of this.pendingAdds) {
      if (!present.has(pairId(added))) {
        pairs.push(added);
        present.add(pairId(added));
      }
    }
    return pairs;
  }

  dirty(): boolean {
    return this.pendingAdds.length > 0 || this.pendingRemoves.length > 0;
  }

  /** Local referential validation of the effective mapping. */
  validateLocal(): string[] {
    const project = this.project;
    if (!project) return ["no project loaded"];
    const problems: string[] = [];
    const unified = this.schemes[project.unifiedSchemeId];
    const unifiedIds = new Set(unified?.nodes.map((node) => node.id) ?? []);
    for (const pair of this.effectivePairs()) {
      if (!unifiedIds.has(pair.unifiedNodeId)) {
        problems.push(`unknown unified node ${pair.unifiedNodeId}`);
      }
      if (!project.previousSchemeIds.includes(pair.previousSchemeId)) {
        problems.push(`scheme ${pair.previousSchemeId} is not part of this project`);
        continue;
      }
      const scheme = this.schemes[pair.previousSchemeId];
      if (!scheme?.nodes.some((node) => node.id === pair.previousNodeId)) {
        problems.push(
          `unknown node ${pair.previousNodeId} in ${pair.previousSchemeId}`);
      }
    }
    return problems;
  }

  canCommit(): boolean {
    return this.dirty() && !this.offline && this.validateLocal().length === 0;
  }

  addPair(key: PairKey): EditResult {
    const project = this.project;
    if (!project) return { applied: false, notice: "no project loaded" };

    const unified = this.schemes[project.unifiedSchemeId];
    if (!unified?.nodes.some((node) => node.id === key.unifiedNodeId)) {
      return { applied: false,
               notice: `${key.unifiedNodeId} is not a node of this project` };
    }
    if (!project.previousSchemeIds.includes(key.previousSchemeId)) {
      return { applied: false,
               notice: `${key.previousSchemeId} is not a scheme of this project` };
    }
    const scheme = this.schemes[key.previousSchemeId];
    if (!scheme?.nodes.some((node) => node.id === key.previousNodeId)) {
      return { applied: false,
               notice: `${key.previousNodeId} is not a node of ${key.previousSchemeId}` };
    }

    if (this.effectivePairs().some((pair) => samePair(pair, key))) {
      return { applied: false, notice: "pair already mapped; nothing to do" };
    }
    // re-adding something marked for removal just cancels the removal
    this.pendingRemoves = this.pendingRemoves.filter((pair) => !samePair(pair, key));
    if (!this.persistedPairs().some((pair) => samePair(pair, key))) {
      this.pendingAdds.push(key);
    }
    this.persistEdits();
    return { applied: true };
  }

  removePair(key: PairKey): EditResult {
    const inAdds = this.pendingAdds.some((pair) => samePair(pair, key));
    if (inAdds) {
      this.pendingAdds = this.pendingAdds.filter((pair) => !samePair(pair, key));
      this.persistEdits();
      return { applied: true };
    }
    if (this.persistedPairs().some((pair) => samePair(pair, key))) {
      if (!this.pendingRemoves.some((pair) => samePair(pair, key))) {
        this.pendingRemoves.push(key);
        this.persistEdits();
      }
      return { applied: true };
    }
    return { applied: false, notice: "pair is not in the mapping" };
  }

  discardEdits(): void {
    this.pendingAdds = [];
    this.pendingRemoves = [];
    this.persistEdits();
  }

  /** Local metric preview over the effective pairs (same formulas as the
   * server; parity is pinned by the shared golden vectors). */
  preview(): LocalReport {
    const project = this.project;
    if (!project) throw new Error("no project loaded");
    const unified = this.schemes[project.unifiedSchemeId];
    if (!unified) throw new Error("unified scheme missing from snapshot");
    const previous: PreviousSchemeNodes[] = project.previousSchemeIds.map((id) => ({
      id,
      nodeIds: this.schemes[id]?.nodes.map((node) => node.id) ?? [],
    }));
    return computeReport(
      project.unifiedSchemeId,
      unified.nodes.map((node) => node.id),
      previous,
      this.effectivePairs());
  }

  async commit(): Promise<CommitResult> {
    if (!this.dirty()) return { kind: "clean" };
    const problems = this.validateLocal();
    if (problems.length > 0) {
      return { kind: "invalid", notice: problems.join("; ") };
    }
    try {
      const revision = await this.online(() =>
        putMapping(this.base, this.projectId, this.effectivePairs(), this.revision));
      await this.refreshAfterCommit(revision);
      return { kind: "committed", revision };
    } catch (error) {
      if (error instanceof RevisionConflictError) {
        return { kind: "conflict", current: error.current };
      }
      if (error instanceof MappingRejectedError) {
        return { kind: "rejected", violations: error.violations };
      }
      if (error instanceof ConnectionLostError) {
        return { kind: "offline" };
      }
      throw error;
    }
  }

  private async refreshAfterCommit(revision: number): Promise<void> {
    this.pendingAdds = [];
    this.pendingRemoves = [];
    this.persistEdits();
    const snapshot = await this.online(() => fetchProject(this.base, this.projectId));
    this.project = snapshot.project;
    this.schemes = snapshot.schemes;
    this.revision = snapshot.project.revision;
    this.serverReport = await this.online(() =>
      fetchMetrics(this.base, this.projectId));
    if (this.revision !== revision) {
      // someone squeezed a commit in between; the snapshot is still coherent
      this.lastNotice = `project moved on to revision ${this.revision}`;
    }
  }

  /** Conflict resolution: fetch the latest snapshot, then replay the pending
   * edits on top of it (edits that no longer apply drop out naturally). */
  async reloadAndReplay(): Promise<void> {
    const adds = this.pendingAdds;
    const removes = this.pendingRemoves;
    const snapshot = await this.online(() => fetchProject(this.base, this.projectId));
    this.project = snapshot.project;
    this.schemes = snapshot.schemes;
    this.revision = snapshot.project.revision;
    this.serverReport = await this.online(() =>
      fetchMetrics(this.base, this.projectId));

    this.pendingAdds = [];
    this.pendingRemoves = [];
    const persisted = this.persistedPairs();
    for (const add of adds) {
      if (!persisted.some((pair) => samePair(pair, add))) {
        this.addPair(add);
      }
    }
    for (const remove of removes) {
      if (persisted.some((pair) => samePair(pair, remove))) {
        this.removePair(remove);
      }
    }
    this.persistEdits();
  }
}
