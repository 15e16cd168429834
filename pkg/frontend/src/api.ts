/**
 * Typed client for the machine service HTTP API.
 *
 * The fetch implementation is injectable so tests can run against a fake
 * transport; production code passes nothing and gets the real one.
 */

import type {
  AlphabetResult,
  ApiErrorBody,
  ExportResult,
  MachineDocument,
  MachineKind,
  MachineSummary,
  ValidateResponse,
} from "./types";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiError extends Error {
  constructor(
    readonly httpStatus: number,
    readonly code: string,
    message: string,
    readonly details?: unknown,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

/** Either a run outcome or, for kind=dfa on an invalid machine, the diagnostic. */
export type RunResponse =
  | { accepted: boolean; trace: number[][] }
  | { ok: false; error: { code: string; state?: number; symbol?: string; message: string } };

export class ApiClient {
  private readonly fetcher: FetchLike;

  constructor(
    readonly baseUrl: string,
    fetcher?: FetchLike,
  ) {
    // Trailing slashes would double up when joining paths.
    this.baseUrl = baseUrl.replace(/\/+$/, "");
    this.fetcher = fetcher ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetcher(this.baseUrl + path, init);
    if (response.status === 204) {
      return undefined as T;
    }
    if (!response.ok) {
      let envelope: ApiErrorBody | null = null;
      try {
        envelope = (await response.json()) as ApiErrorBody;
      } catch {
        // Non-JSON error body; fall through to the generic error below.
      }
      if (envelope && typeof envelope.code === "string") {
        throw new ApiError(envelope.httpStatus, envelope.code, envelope.message, envelope.details);
      }
      throw new ApiError(response.status, "INTERNAL", `HTTP ${response.status}`);
    }
    return (await response.json()) as T;
  }

  listMachines(): Promise<MachineSummary[]> {
    return this.request("GET", "/machines");
  }

  createMachine(doc: MachineDocument | { name: string }, id?: string): Promise<{ id: string }> {
    const query = id === undefined ? "" : `?id=${encodeURIComponent(id)}`;
    return this.request("POST", `/machines${query}`, doc);
  }

  getMachine(id: string): Promise<MachineDocument> {
    return this.request("GET", `/machines/${encodeURIComponent(id)}`);
  }

  putMachine(id: string, doc: MachineDocument): Promise<{ id: string }> {
    return this.request("PUT", `/machines/${encodeURIComponent(id)}`, doc);
  }

  deleteMachine(id: string): Promise<void> {
    return this.request("DELETE", `/machines/${encodeURIComponent(id)}`);
  }

  validate(id: string, kind: MachineKind): Promise<ValidateResponse> {
    return this.request("POST", `/machines/${encodeURIComponent(id)}/validate?kind=${kind}`);
  }

  run(id: string, tape: string[], kind: MachineKind): Promise<RunResponse> {
    return this.request("POST", `/machines/${encodeURIComponent(id)}/run`, { tape, kind });
  }

  definition(id: string): Promise<{ text: string }> {
    return this.request("GET", `/machines/${encodeURIComponent(id)}/definition`);
  }

  /** Node identifiers are regenerated server-side on every call unless a
   * nonce is pinned, so two exports of the same machine differ. */
  exportTikz(id: string, options?: { nonce?: string; scale?: number; grid?: number }): Promise<ExportResult> {
    const params = new URLSearchParams();
    if (options?.nonce !== undefined) params.set("nonce", options.nonce);
    if (options?.scale !== undefined) params.set("scale", String(options.scale));
    if (options?.grid !== undefined) params.set("grid", String(options.grid));
    const query = params.size > 0 ? `?${params.toString()}` : "";
    return this.request("GET", `/machines/${encodeURIComponent(id)}/export/tikz${query}`);
  }

  alphabet(id: string): Promise<AlphabetResult> {
    return this.request("GET", `/machines/${encodeURIComponent(id)}/alphabet`);
  }
}
