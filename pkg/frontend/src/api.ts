// Typed client for the workbench service. All project state flows through
// these endpoints; the UI never touches files.

import {
  MetricReportDoc,
  PairKey,
  ProjectResponse,
  ProjectSummary,
  ViolationDoc,
} from "./types.js";

export class ApiError extends Error {
  constructor(message: string, readonly status: number, readonly body: unknown) {
    super(message);
  }
}

export class RevisionConflictError extends Error {
  constructor(readonly current: number, readonly expected: number) {
    super(`expected revision ${expected}, server is at ${current}`);
  }
}

export class MappingRejectedError extends Error {
  constructor(readonly violations: ViolationDoc[]) {
    super("mapping failed validation on the server");
  }
}

/** Network-level failure: server unreachable, not an HTTP error. */
export class ConnectionLostError extends Error {
  constructor(cause: unknown) {
    super(`connection to the service lost: ${String(cause)}`);
  }
}

async function request(base: string, path: string, init?: RequestInit): Promise<Response> {
  try {
    return await fetch(`${base}${path}`, init);
  } catch (cause) {
    throw new ConnectionLostError(cause);
  }
}

async function json<T>(response: Response): Promise<T> {
  if (!response.ok) {
    const body = await response.json().catch(() => null);
    throw new ApiError(`${response.status} on ${response.url}`, response.status, body);
  }
  return response.json() as Promise<T>;
}

export async function fetchProjects(base: string): Promise<ProjectSummary[]> {
  const document = await json<{ projects: ProjectSummary[] }>(
    await request(base, "/api/projects"));
  return document.projects;
}

export async function fetchProject(base: string, id: string): Promise<ProjectResponse> {
  return json(await request(base, `/api/projects/${encodeURIComponent(id)}`));
}

export async function fetchMetrics(base: string, id: string): Promise<MetricReportDoc> {
  return json(await request(base, `/api/projects/${encodeURIComponent(id)}/metrics`));
}

export async function putMapping(base: string, id: string, pairs: PairKey[],
                                 expectedRevision: number): Promise<number> {
  const response = await request(
    base, `/api/projects/${encodeURIComponent(id)}/mapping`, {
      method: "PUT",
      headers: {
        "Content-Type": "application/json",
        "X-Expected-Revision": String(expectedRevision),
      },
      body: JSON.stringify({
        schemaVersion: 1,
        kind: "mapping",
        projectId: id,
        pairs,
      }),
    });
  if (response.status === 409) {
    const body = await response.json() as
      { details?: { current?: number; expected?: number } };
    throw new RevisionConflictError(
      body.details?.current ?? -1, body.details?.expected ?? expectedRevision);
  }
  if (response.status === 422) {
    const body = await response.json() as { violations?: ViolationDoc[] };
    throw new MappingRejectedError(body.violations ?? []);
  }
  const document = await json<{ revision: number }>(response);
  return document.revision;
}
