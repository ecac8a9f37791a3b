/** Wire payloads from the store API and the view models derived from them. */

export interface ApiCluster {
  cluster_id: string;
  name: string;
  status: string;
  merged_into: string | null;
  representative: string[];
  member_count: number;
  member_video_ids: string[];
}

export interface TaxonomyRole {
  id: string;
  name: string;
  category: string;
  description: string;
}

export interface TaxonomyPayload {
  version: string;
  categories: { id: string; display_name: string }[];
  roles: TaxonomyRole[];
}

export interface VideoDetail {
  video: { video_id: string; duration_s: number; fps: number; subvertical: string };
  units: {
    video_id: string;
    index: number;
    start_s: number;
    end_s: number;
    transcript_text: string;
    keyframe_indices: number[];
  }[];
  annotations: {
    video_id: string;
    unit_index: number;
    role_id: string;
    confidence: number;
    rationale: string;
  }[];
  sequence: string[];
  arc_matches: { abbrev: string; name: string; witness: number[] }[];
}

export interface ApiErrorBody {
  code: "not_found" | "conflict" | "invalid" | "unavailable";
  message: string;
}

/** Mirrors the API payload exactly; status is never derived client-side. */
export interface ClusterViewModel {
  clusterId: string;
  name: string;
  status: string;
  mergedInto: string | null;
  representative: string[];
  memberCount: number;
  sampleMembers: string[];
}

export type CurationAction =
  | { kind: "merge"; sourceIds: string[]; targetId: string; optimistic: false }
  | { kind: "rename"; clusterId: string; name: string; optimistic: true }
  | { kind: "approve"; clusterId: string; optimistic: false };

export interface SubmitResult {
  ok: boolean;
  /** true when client-side validation stopped the action before any request */
  blockedClientSide?: boolean;
  message?: string;
  errorCode?: string;
}

/** Chip text for a role id; unknown ids stay visible instead of vanishing. */
export function chipLabel(
  roleId: string,
  roleNames: Map<string, string>,
): { label: string; unknown: boolean } {
  const known = roleNames.get(roleId);
  if (known === undefined) {
    return { label: `unknown role (${roleId})`, unknown: true };
  }
  return { label: known, unknown: false };
}

export function toViewModel(cluster: ApiCluster): ClusterViewModel {
  return {
    clusterId: cluster.cluster_id,
    name: cluster.name,
    status: cluster.status,
    mergedInto: cluster.merged_into,
    representative: [...cluster.representative],
    memberCount: cluster.member_count,
    sampleMembers: cluster.member_video_ids.slice(0, 5),
  };
}
