/** End-to-end against the real run server: build a 16-candidate demo run,
 * serve it with `clustergrid serve`, and drive the UI's data layer at it. */

import { execFileSync, spawn, type ChildProcess } from "node:child_process";
import { mkdtempSync, rmSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { afterAll, beforeAll, describe, expect, it } from "vitest";

import { ConflictError, DecisionsClient, fetchManifest } from "../src/api.js";
import { applyDecision, defaultFilters, isGated, visibleCandidates } from "../src/state.js";
import type { DecisionsDoc } from "../src/types.js";
import { emptyDecisions } from "../src/types.js";

let workDir: string;
let server: ChildProcess | null = null;
let baseUrl = "";

async function startServer(runDir: string): Promise<string> {
  const child = spawn("python3", [
    "-m", "clustergrid.cli", "serve", "--run", runDir, "--port", "0",
  ]);
  server = child;
  return new Promise((resolve, reject) => {
    let buffer = "";
    const timer = setTimeout(
      () => reject(new Error(`server did not start: ${buffer}`)),
      15000
    );
    child.stdout!.on("data", (chunk: Buffer) => {
      buffer += chunk.toString();
      const match = buffer.match(/http:\/\/([\d.]+):(\d+)\//);
      if (match) {
        clearTimeout(timer);
        resolve(`http://${match[1]}:${match[2]}`);
      }
    });
    child.on("exit", (code) =>
      reject(new Error(`server exited early (${code}): ${buffer}`))
    );
  });
}

beforeAll(async () => {
  workDir = mkdtempSync(join(tmpdir(), "triage-it-"));
  execFileSync("python3", ["-m", "clustergrid.demo", "--out", workDir]);
  execFileSync("python3", [
    "-m", "clustergrid.cli", "run",
    "--config", join(workDir, "config.json"),
    "--out", join(workDir, "run"),
  ]);
  baseUrl = await startServer(join(workDir, "run"));
}, 60000);

afterAll(() => {
  server?.kill();
  rmSync(workDir, { recursive: true, force: true });
});

describe("triage round-trip against the run server", () => {
  it("loads the 16-candidate manifest", async () => {
    const manifest = await fetchManifest(baseUrl);
    expect(manifest.schema_version).toBe(1);
    expect(manifest.candidates).toHaveLength(16);
    expect(manifest.dataset.rows).toBe(519);
  });

  it("gate filter hides exactly the gated candidates", async () => {
    const manifest = await fetchManifest(baseUrl);
    const gatedIds = manifest.candidates
      .filter(isGated)
      .map((c) => c.candidate_id);
    expect(gatedIds.length).toBeGreaterThan(0); // the demo gates some

    const surviving = visibleCandidates(
      manifest,
      { ...defaultFilters(), gate: "pass" },
      "manifest",
      emptyDecisions()
    );
    expect(surviving).toHaveLength(16 - gatedIds.length);
    expect(surviving.some((c) => gatedIds.includes(c.candidate_id))).toBe(false);
  });

  it("decision lifecycle persists across reloads", async () => {
    const manifest = await fetchManifest(baseUrl);
    const target = manifest.candidates.find((c) => !isGated(c))!.candidate_id;
    const client = new DecisionsClient(baseUrl);

    let doc = await client.load();
    for (const status of ["ruled_out", "shortlisted", "selected"] as const) {
      doc = applyDecision(doc, target, status, `now ${status}`, new Date().toISOString()).doc;
      doc = await client.save(doc);
      // a fresh client models a browser reload
      const reloaded = await new DecisionsClient(baseUrl).load();
      expect(reloaded.decisions[target]?.status).toBe(status);
      expect(reloaded.decisions[target]?.note).toBe(`now ${status}`);
    }
  });

  it("transferring the selection keeps exactly one selected", async () => {
    const manifest = await fetchManifest(baseUrl);
    const pass = manifest.candidates.filter((c) => !isGated(c));
    const [first, second] = [pass[0].candidate_id, pass[1].candidate_id];
    const client = new DecisionsClient(baseUrl);

    let doc = await client.load();
    doc = applyDecision(doc, first, "selected", "", "t1").doc;
    doc = await client.save(doc);
    const edit = applyDecision(doc, second, "selected", "", "t2");
    expect(edit.demoted).toBe(first);
    doc = await client.save(edit.doc);
    expect(doc.decisions[first].status).toBe("shortlisted");
    expect(doc.decisions[second].status).toBe("selected");
  });

  it("server rejects a second selected with 409", async () => {
    const client = new DecisionsClient(baseUrl);
    const twoSelected: DecisionsDoc = {
      schema_version: 1,
      decisions: {
        kmeans_v0: { status: "selected", note: "", updated_at: "t" },
        kmeans_v1: { status: "selected", note: "", updated_at: "t" },
      },
    };
    await expect(client.save(twoSelected)).rejects.toBeInstanceOf(ConflictError);
    // and the stored document is untouched by the rejected write
    const stored = await client.load();
    const selected = Object.values(stored.decisions).filter(
      (d) => d.status === "selected"
    );
    expect(selected.length).toBeLessThanOrEqual(1);
  });

  it("serves the archived chart SVGs the gallery displays", async () => {
    const manifest = await fetchManifest(baseUrl);
    const withFiles = manifest.candidates.find((c) => c.files !== null)!;
    const response = await fetch(`${baseUrl}/${withFiles.files!.chart}`);
    expect(response.status).toBe(200);
    expect(response.headers.get("content-type")).toContain("image/svg+xml");
    expect(await response.text()).toContain("<svg");
  });
});
