/** App bootstrap: wire the controller to the DOM and keep them in sync. */

import { ApiClient } from "./api.js";
import { CurationController } from "./controller.js";
import type { CurationAction } from "./types.js";
import { renderBanner, renderClusterCard, renderVideoDetail, type UiState } from "./view.js";

const api = new ApiClient("");
const controller = new CurationController(api);
const ui: UiState = {
  roleNames: new Map(),
  mergeSource: null,
  inlineErrors: new Map(),
  detail: null,
};

function render(): void {
  const root = document.getElementById("app");
  if (!root) {
    return;
  }
  root.replaceChildren();

  root.appendChild(renderBanner(controller.banner, () => void refresh()));

  const toolbar = document.createElement("div");
  toolbar.className = "toolbar";
  const filter = document.createElement("select");
  for (const [value, label] of [
    ["", "Active clusters"],
    ["proposed", "Proposed"],
    ["approved", "Approved"],
    ["merged", "Merged away"],
    ["all", "Everything"],
  ] as const) {
    const option = document.createElement("option");
    option.value = value;
    option.textContent = label;
    option.selected = (controller.statusFilter ?? "") === value;
    filter.appendChild(option);
  }
  filter.addEventListener("change", () => {
    controller.statusFilter = filter.value || undefined;
    void refresh();
  });
  toolbar.appendChild(filter);
  root.appendChild(toolbar);

  const list = document.createElement("section");
  list.id = "cluster-list";
  if (controller.clusters.length === 0 && !controller.banner) {
    const empty = document.createElement("p");
    empty.className = "empty-state";
    empty.textContent =
      "No clusters to review yet. Run the pipeline through the cluster stage first.";
    list.appendChild(empty);
  }
  for (const cluster of controller.clusters) {
    list.appendChild(
      renderClusterCard(cluster, ui, {
        onRename: (clusterId, currentName) => {
          const name = window.prompt("New cluster name", currentName);
          if (name === null) {
            return;
          }
          void submit({ kind: "rename", clusterId, name, optimistic: true }, clusterId);
        },
        onApprove: (clusterId) =>
          void submit({ kind: "approve", clusterId, optimistic: false }, clusterId),
        onMergeStart: (clusterId) => {
          ui.mergeSource = clusterId;
          render();
        },
        onMergeCancel: () => {
          ui.mergeSource = null;
          render();
        },
        onMergeInto: (sourceId, targetId) => {
          ui.mergeSource = null;
          void submit(
            { kind: "merge", sourceIds: [sourceId], targetId, optimistic: false },
            targetId,
          );
        },
        onMemberClick: (videoId) => void showDetail(videoId),
      }),
    );
  }
  root.appendChild(list);

  if (ui.detail) {
    root.appendChild(
      renderVideoDetail(ui.detail, ui, () => {
        ui.detail = null;
        render();
      }),
    );
  }
}

async function submit(action: CurationAction, errorAnchor: string): Promise<void> {
  ui.inlineErrors.delete(errorAnchor);
  const result = await controller.submit(action);
  if (!result.ok && result.message) {
    ui.inlineErrors.set(errorAnchor, result.message);
  }
  render();
}

async function showDetail(videoId: string): Promise<void> {
  try {
    ui.detail = await api.videoDetail(videoId);
  } catch (error) {
    ui.inlineErrors.set(videoId, String(error));
  }
  render();
}

async function refresh(): Promise<void> {
  await controller.loadClusters();
  render();
}

async function boot(): Promise<void> {
  try {
    const taxonomy = await api.taxonomy();
    ui.roleNames = new Map(taxonomy.roles.map((role) => [role.id, role.name]));
  } catch {
    // Chips fall back to "unknown role" rendering until a retry succeeds.
  }
  await refresh();
}

void boot();
