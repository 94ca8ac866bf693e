import { describe, expect, it } from "vitest";

import {
  ApiError,
  ConflictError,
  DecisionsClient,
  fetchManifest,
  IncompatibleManifestError,
} from "../src/api.js";
import { emptyDecisions } from "../src/types.js";

function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

describe("fetchManifest", () => {
  it("returns a schema-1 manifest", async () => {
    const doc = { schema_version: 1, candidates: [] };
    const manifest = await fetchManifest("", async () => jsonResponse(doc));
    expect(manifest.candidates).toEqual([]);
  });

  it("rejects other schema versions", async () => {
    await expect(
      fetchManifest("", async () => jsonResponse({ schema_version: 2 }))
    ).rejects.toBeInstanceOf(IncompatibleManifestError);
  });

  it("maps HTTP failures onto ApiError", async () => {
    await expect(
      fetchManifest("", async () => jsonResponse({ error: "gone" }, 404))
    ).rejects.toMatchObject({ status: 404, message: "gone" });
  });

  it("wraps network failures", async () => {
    await expect(
      fetchManifest("", async () => {
        throw new TypeError("connection refused");
      })
    ).rejects.toBeInstanceOf(ApiError);
  });
});

describe("DecisionsClient", () => {
  it("PUTs the document and returns the stored copy", async () => {
    const calls: { url: string; init?: RequestInit }[] = [];
    const client = new DecisionsClient("", async (url, init) => {
      calls.push({ url: String(url), init });
      return jsonResponse(JSON.parse(String(init?.body)));
    });
    const doc = emptyDecisions();
    doc.decisions["kmeans_v0"] = {
      status: "shortlisted",
      note: "",
      updated_at: "t",
    };
    const stored = await client.save(doc);
    expect(calls[0].url).toBe("/api/decisions");
    expect(calls[0].init?.method).toBe("PUT");
    expect(stored).toEqual(doc);
  });

  it("raises ConflictError on 409", async () => {
    const client = new DecisionsClient("", async () =>
      jsonResponse({ error: "at most one candidate may be selected" }, 409)
    );
    await expect(client.save(emptyDecisions())).rejects.toBeInstanceOf(ConflictError);
  });

  it("raises ApiError with the server's message on 400", async () => {
    const client = new DecisionsClient("", async () =>
      jsonResponse({ error: "bad status" }, 400)
    );
    await expect(client.save(emptyDecisions())).rejects.toMatchObject({
      status: 400,
      message: "bad status",
    });
  });
});
