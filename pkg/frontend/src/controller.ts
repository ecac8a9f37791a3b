/** DOM-free state and mutation logic behind the curation screen.
 *
 * The controller never derives authoritative state: after any successful
 * mutation it re-fetches from the server, so what renders always equals a
 * fresh GET. Renames apply optimistically (and roll back on failure);
 * merges and approvals wait for the server, since they change identity.
 */

import { ApiClient, ApiRequestError } from "./api.js";
import {
  type ClusterViewModel,
  type CurationAction,
  type SubmitResult,
  toViewModel,
} from "./types.js";

export interface Banner {
  kind: "error" | "unavailable" | "info";
  message: string;
  retryable: boolean;
}

export class CurationController {
  clusters: ClusterViewModel[] = [];
  banner: Banner | null = null;
  statusFilter: string | undefined = undefined;
  actor = "strategist";
  private inFlight = new Set<string>();

  constructor(private readonly api: ApiClient) {}

  /** Clusters to render: the server already sorts by member count and hides
   * merged ones unless asked; keep its order untouched. */
  async loadClusters(): Promise<void> {
    try {
      const payload = await this.api.clusters(this.statusFilter);
      this.clusters = payload.map(toViewModel);
      this.banner = null;
    } catch (error) {
      this.clusters = [];
      this.banner = this.bannerFor(error);
    }
  }

  /** Validate client-side, enforce one in-flight mutation per cluster, POST,
   * then re-fetch. Returns what the view should show inline. */
  async submit(action: CurationAction): Promise<SubmitResult> {
    const blocked = this.validate(action);
    if (blocked) {
      return { ok: false, blockedClientSide: true, message: blocked };
    }
    const touched = this.touchedClusters(action);
    if (touched.some((clusterId) => this.inFlight.has(clusterId))) {
      return {
        ok: false,
        blockedClientSide: true,
        message: "another change for this cluster is still in flight",
      };
    }
    touched.forEach((clusterId) => this.inFlight.add(clusterId));

    let rollback: (() => void) | null = null;
    if (action.kind === "rename" && action.optimistic) {
      const target = this.clusters.find((c) => c.clusterId === action.clusterId);
      if (target) {
        const previous = target.name;
        target.name = action.name;
        rollback = () => {
          target.name = previous;
        };
      }
    }

    try {
      if (action.kind === "merge") {
        await this.api.merge(action.sourceIds, action.targetId, this.actor);
      } else if (action.kind === "rename") {
        await this.api.rename(action.clusterId, action.name, this.actor);
      } else {
        await this.api.approve(action.clusterId, this.actor);
      }
    } catch (error) {
      rollback?.();
      const result: SubmitResult = {
        ok: false,
        message: error instanceof Error ? error.message : String(error),
        errorCode: error instanceof ApiRequestError ? error.code : "unavailable",
      };
      if (error instanceof ApiRequestError && error.code === "unavailable") {
        this.banner = this.bannerFor(error);
      }
      return result;
    } finally {
      touched.forEach((clusterId) => this.inFlight.delete(clusterId));
    }

    await this.loadClusters();
    return { ok: true };
  }

  /** Client-side checks; a non-null return means nothing reaches the wire. */
  private validate(action: CurationAction): string | null {
    if (action.kind === "rename" && action.name.trim() === "") {
      return "name must be non-empty";
    }
    if (action.kind === "merge") {
      if (action.sourceIds.length === 0) {
        return "pick at least one source cluster";
      }
      const unique = new Set(action.sourceIds);
      if (unique.size !== action.sourceIds.length) {
        return "merge sources must be distinct";
      }
      if (unique.has(action.targetId)) {
        return "a cluster cannot merge into itself";
      }
    }
    return null;
  }

  private touchedClusters(action: CurationAction): string[] {
    if (action.kind === "merge") {
      return [...action.sourceIds, action.targetId];
    }
    return [action.clusterId];
  }

  private bannerFor(error: unknown): Banner {
    if (error instanceof ApiRequestError && error.code !== "unavailable") {
      return { kind: "error", message: error.message, retryable: false };
    }
    const message =
      error instanceof Error ? error.message : "the API is unreachable";
    return { kind: "unavailable", message, retryable: true };
  }
}
