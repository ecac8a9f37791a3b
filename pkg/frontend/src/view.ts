/** DOM rendering. Pure functions from state to elements; all state lives in
 * the controller and the tiny UiState for in-progress interactions. */

import type { Banner } from "./controller.js";
import { chipLabel, type ClusterViewModel, type VideoDetail } from "./types.js";

export interface UiState {
  roleNames: Map<string, string>;
  mergeSource: string | null;
  inlineErrors: Map<string, string>;
  detail: VideoDetail | null;
}

export function roleChip(roleId: string, roleNames: Map<string, string>): HTMLElement {
  const chip = document.createElement("span");
  const { label, unknown } = chipLabel(roleId, roleNames);
  chip.className = unknown ? "chip chip-unknown" : "chip";
  chip.textContent = label;
  return chip;
}

export function renderBanner(banner: Banner | null, onRetry: () => void): HTMLElement {
  const host = document.createElement("div");
  host.id = "banner";
  if (!banner) {
    return host;
  }
  host.className = `banner banner-${banner.kind}`;
  const text = document.createElement("span");
  text.textContent = banner.message;
  host.appendChild(text);
  if (banner.retryable) {
    const retry = document.createElement("button");
    retry.textContent = "Retry";
    retry.className = "retry";
    retry.addEventListener("click", onRetry);
    host.appendChild(retry);
  }
  return host;
}

export interface CardHandlers {
  onRename: (clusterId: string, currentName: string) => void;
  onApprove: (clusterId: string) => void;
  onMergeStart: (clusterId: string) => void;
  onMergeInto: (sourceId: string, targetId: string) => void;
  onMergeCancel: () => void;
  onMemberClick: (videoId: string) => void;
}

export function renderClusterCard(
  cluster: ClusterViewModel,
  ui: UiState,
  handlers: CardHandlers,
): HTMLElement {
  const card = document.createElement("article");
  card.className = `cluster-card status-${cluster.status}`;
  card.dataset.clusterId = cluster.clusterId;

  const header = document.createElement("header");
  const title = document.createElement("h3");
  title.textContent = cluster.name || "(unnamed)";
  const status = document.createElement("span");
  status.className = "status-badge";
  status.textContent = cluster.status;
  header.append(title, status);
  card.appendChild(header);

  const chips = document.createElement("div");
  chips.className = "chips";
  for (const roleId of cluster.representative) {
    chips.appendChild(roleChip(roleId, ui.roleNames));
  }
  card.appendChild(chips);

  const members = document.createElement("p");
  members.className = "members";
  members.textContent = `${cluster.memberCount} member(s): `;
  for (const videoId of cluster.sampleMembers) {
    const link = document.createElement("a");
    link.href = "#";
    link.textContent = videoId;
    link.addEventListener("click", (event) => {
      event.preventDefault();
      handlers.onMemberClick(videoId);
    });
    members.appendChild(link);
    members.appendChild(document.createTextNode(" "));
  }
  card.appendChild(members);

  const error = ui.inlineErrors.get(cluster.clusterId);
  if (error) {
    const note = document.createElement("p");
    note.className = "inline-error";
    note.textContent = error;
    card.appendChild(note);
  }

  const actions = document.createElement("div");
  actions.className = "actions";
  const renameButton = document.createElement("button");
  renameButton.textContent = "Rename";
  renameButton.addEventListener("click", () =>
    handlers.onRename(cluster.clusterId, cluster.name),
  );
  actions.appendChild(renameButton);

  const approveButton = document.createElement("button");
  approveButton.textContent = "Approve";
  approveButton.disabled = cluster.status === "approved";
  approveButton.addEventListener("click", () => handlers.onApprove(cluster.clusterId));
  actions.appendChild(approveButton);

  if (ui.mergeSource === null) {
    const mergeButton = document.createElement("button");
    mergeButton.textContent = "Merge into…";
    mergeButton.addEventListener("click", () =>
      handlers.onMergeStart(cluster.clusterId),
    );
    actions.appendChild(mergeButton);
  } else if (ui.mergeSource === cluster.clusterId) {
    const cancelButton = document.createElement("button");
    cancelButton.textContent = "Cancel merge";
    cancelButton.addEventListener("click", handlers.onMergeCancel);
    actions.appendChild(cancelButton);
  } else {
    const hereButton = document.createElement("button");
    hereButton.className = "merge-here";
    hereButton.textContent = "Merge here";
    hereButton.addEventListener("click", () =>
      handlers.onMergeInto(ui.mergeSource as string, cluster.clusterId),
    );
    actions.appendChild(hereButton);
  }
  card.appendChild(actions);
  return card;
}

export function renderVideoDetail(
  detail: VideoDetail,
  ui: UiState,
  onClose: () => void,
): HTMLElement {
  const panel = document.createElement("aside");
  panel.className = "detail-panel";
  const close = document.createElement("button");
  close.textContent = "Close";
  close.addEventListener("click", onClose);
  panel.appendChild(close);

  const heading = document.createElement("h3");
  heading.textContent = `${detail.video.video_id} (${detail.video.duration_s}s)`;
  panel.appendChild(heading);

  const roleByUnit = new Map(
    detail.annotations.map((a) => [a.unit_index, a.role_id]),
  );
  const list = document.createElement("ol");
  list.className = "unit-list";
  for (const unit of detail.units) {
    const item = document.createElement("li");
    const role = roleByUnit.get(unit.index);
    item.appendChild(roleChip(role ?? "(unlabeled)", ui.roleNames));
    const text = document.createElement("span");
    text.textContent =
      ` ${unit.start_s.toFixed(1)}-${unit.end_s.toFixed(1)}s: ` +
      (unit.transcript_text || "(silent)");
    item.appendChild(text);
    list.appendChild(item);
  }
  panel.appendChild(list);

  const arcs = document.createElement("p");
  arcs.className = "arc-matches";
  arcs.textContent = detail.arc_matches.length
    ? "Arcs: " + detail.arc_matches.map((m) => `${m.name} (${m.abbrev})`).join(", ")
    : "No arc patterns matched.";
  panel.appendChild(arcs);
  return panel;
}
