/** End-to-end against a real server on a scratch project: the flows behind
 * the Merge/Rename/Approve buttons, checked against fresh GETs and the
 * on-disk curation log. Requires the Python package to be installed.
 */

import { execFileSync, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, readFileSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { CurationController } from "../src/controller.js";

let workDir: string;
let projectDir: string;
let server: ChildProcess | null = null;
let baseUrl = "";

function adstory(...args: string[]): void {
  execFileSync("adstory", args, { stdio: "pipe" });
}

async function startServer(): Promise<string> {
  return new Promise((resolve, reject) => {
    server = spawn(
      "adstory",
      ["serve", "--project", projectDir, "--port", "0"],
      { stdio: ["ignore", "pipe", "pipe"] },
    );
    let output = "";
    const timer = setTimeout(
      () => reject(new Error(`server did not start: ${output}`)),
      15000,
    );
    server.stdout!.on("data", (chunk: Buffer) => {
      output += chunk.toString();
      const match = output.match(/serving on (http:\/\/[^\s]+)/);
      if (match) {
        clearTimeout(timer);
        resolve(match[1]!);
      }
    });
    server.stderr!.on("data", (chunk: Buffer) => {
      output += chunk.toString();
    });
    server.on("exit", (code) => {
      clearTimeout(timer);
      reject(new Error(`server exited early (${code}): ${output}`));
    });
  });
}

function curationLogEvents(): { action: string }[] {
  const raw = readFileSync(join(projectDir, "curation_log.jsonl"), "utf-8");
  return raw
    .split("\n")
    .filter((line) => line.trim() !== "")
    .map((line) => JSON.parse(line) as { action: string });
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "adstory-ui-"));
  projectDir = join(workDir, "project");
  const corpusDir = join(workDir, "corpus");
  execFileSync("python3", ["-m", "adstory.fixtures", corpusDir], { stdio: "pipe" });
  adstory("ingest", "--project", projectDir, "--input", join(corpusDir, "input_manifest.json"));
  adstory("segment", "--project", projectDir);
  adstory("detect-story", "--project", projectDir, "--annotator", "lexicon");
  adstory("classify", "--project", projectDir, "--annotator", "lexicon");
  adstory("canonicalize", "--project", projectDir);
  adstory("cluster", "--project", projectDir);
  adstory("summarize", "--project", projectDir, "--annotator", "lexicon");
  baseUrl = await startServer();
}, 60000);

afterAll(() => {
  if (server) {
    server.kill();
  }
  rmSync(workDir, { recursive: true, force: true });
});

describe("curation against a live server", () => {
  it("health and taxonomy respond", async () => {
    const api = new ApiClient(baseUrl);
    expect((await api.health()).status).toBe("ok");
    const taxonomy = await api.taxonomy();
    expect(taxonomy.roles).toHaveLength(23);
  });

  it("merge via the UI flow combines membership, hides the source, and logs exactly one event", async () => {
    const api = new ApiClient(baseUrl);
    const controller = new CurationController(api);
    await controller.loadClusters();
    expect(controller.clusters.length).toBeGreaterThanOrEqual(2);

    const target = controller.clusters[0]!;
    const source = controller.clusters[1]!;
    const combined = target.memberCount + source.memberCount;
    const eventsBefore = curationLogEvents().length;

    const result = await controller.submit({
      kind: "merge",
      sourceIds: [source.clusterId],
      targetId: target.clusterId,
      optimistic: false,
    });
    expect(result.ok).toBe(true);

    // Rendered state equals a fresh GET from a separate client.
    const fresh = await new ApiClient(baseUrl).clusters();
    expect(
      controller.clusters.map((c) => [c.clusterId, c.memberCount, c.status]),
    ).toEqual(fresh.map((c) => [c.cluster_id, c.member_count, c.status]));

    const freshIds = fresh.map((c) => c.cluster_id);
    expect(freshIds).not.toContain(source.clusterId);
    const mergedTarget = fresh.find((c) => c.cluster_id === target.clusterId)!;
    expect(mergedTarget.member_count).toBe(combined);

    const events = curationLogEvents();
    expect(events.length).toBe(eventsBefore + 1);
    expect(events[events.length - 1]!.action).toBe("merge");

    // The source is still inspectable under the merged filter.
    const merged = await api.clusters("merged");
    expect(merged.map((c) => c.cluster_id)).toContain(source.clusterId);
    expect(merged.find((c) => c.cluster_id === source.clusterId)!.merged_into).toBe(
      target.clusterId,
    );
  });

  it("rename round-trips through the server and a fresh fetch", async () => {
    const api = new ApiClient(baseUrl);
    const controller = new CurationController(api);
    await controller.loadClusters();
    const victim = controller.clusters[0]!;
    const result = await controller.submit({
      kind: "rename",
      clusterId: victim.clusterId,
      name: "Hook then payoff arc",
      optimistic: true,
    });
    expect(result.ok).toBe(true);
    const fresh = await new ApiClient(baseUrl).cluster(victim.clusterId);
    expect(fresh.name).toBe("Hook then payoff arc");
    expect(
      controller.clusters.find((c) => c.clusterId === victim.clusterId)!.name,
    ).toBe("Hook then payoff arc");
    const events = curationLogEvents();
    expect(events[events.length - 1]!.action).toBe("rename");
  });

  it("approve succeeds once, conflicts the second time", async () => {
    const api = new ApiClient(baseUrl);
    const controller = new CurationController(api);
    await controller.loadClusters();
    const named = controller.clusters.find((c) => c.name !== "")!;
    const first = await controller.submit({
      kind: "approve",
      clusterId: named.clusterId,
      optimistic: false,
    });
    expect(first.ok).toBe(true);
    const second = await controller.submit({
      kind: "approve",
      clusterId: named.clusterId,
      optimistic: false,
    });
    expect(second.ok).toBe(false);
    expect(second.errorCode).toBe("conflict");
  });

  it("serves the built UI entry point when present", async () => {
    const response = await fetch(`${baseUrl}/api/health`);
    expect(response.status).toBe(200);
  });
});
