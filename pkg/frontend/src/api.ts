/** Fetch wrappers for the run server's two read surfaces and its one write
 * surface (the decisions endpoint). The UI never writes anywhere else. */

import type { DecisionsDoc, Manifest } from "./types.js";
import { emptyDecisions } from "./types.js";

export const MANIFEST_SCHEMA_VERSION = 1;

export class ApiError extends Error {
  constructor(message: string, readonly status: number | null = null) {
    super(message);
    this.name = "ApiError";
  }
}

/** Another candidate is already selected (HTTP 409). */
export class ConflictError extends ApiError {
  constructor(message: string) {
    super(message, 409);
    this.name = "ConflictError";
  }
}

export class IncompatibleManifestError extends Error {
  constructor(readonly version: unknown) {
    super(`unsupported manifest schema_version ${String(version)}`);
    this.name = "IncompatibleManifestError";
  }
}

type FetchLike = typeof fetch;

async function errorMessage(response: Response): Promise<string> {
  try {
    const body = (await response.json()) as { error?: string };
    if (body && typeof body.error === "string") return body.error;
  } catch {
    // fall through to the status line
  }
  return `${response.status} ${response.statusText}`;
}

export async function fetchManifest(
  baseUrl = "",
  fetchImpl: FetchLike = fetch
): Promise<Manifest> {
  let response: Response;
  try {
    response = await fetchImpl(`${baseUrl}/manifest.json`, {
      headers: { Accept: "application/json" },
    });
  } catch (cause) {
    throw new ApiError(`cannot reach the run server: ${String(cause)}`);
  }
  if (!response.ok) {
    throw new ApiError(await errorMessage(response), response.status);
  }
  const manifest = (await response.json()) as Manifest;
  if (manifest.schema_version !== MANIFEST_SCHEMA_VERSION) {
    throw new IncompatibleManifestError(manifest.schema_version);
  }
  return manifest;
}

export class DecisionsClient {
  constructor(
    private readonly baseUrl = "",
    private readonly fetchImpl: FetchLike = fetch
  ) {}

  private get url(): string {
    return `${this.baseUrl}/api/decisions`;
  }

  async load(): Promise<DecisionsDoc> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.url, {
        headers: { Accept: "application/json" },
      });
    } catch (cause) {
      throw new ApiError(`cannot load decisions: ${String(cause)}`);
    }
    if (!response.ok) {
      throw new ApiError(await errorMessage(response), response.status);
    }
    const doc = (await response.json()) as DecisionsDoc;
    return doc ?? emptyDecisions();
  }

  /** Last-writer-wins full-document PUT; resolves to the stored document. */
  async save(doc: DecisionsDoc): Promise<DecisionsDoc> {
    let response: Response;
    try {
      response = await this.fetchImpl(this.url, {
        method: "PUT",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(doc),
      });
    } catch (cause) {
      throw new ApiError(`cannot save decisions: ${String(cause)}`);
    }
    if (response.status === 409) {
      throw new ConflictError(await errorMessage(response));
    }
    if (!response.ok) {
      throw new ApiError(await errorMessage(response), response.status);
    }
    return (await response.json()) as DecisionsDoc;
  }
}
