// Typed client for the management API. Every page mutation goes through
// here; the client also counts requests per path so tests can observe
// polling behaviour.

export interface Violation {
  code: string;
  path: string;
  message: string;
}

export interface ValidationReport {
  valid: boolean;
  violations: Violation[];
}

export interface VersionRecord {
  playbook: Record<string, unknown>;
  revision: number;
  stored_at: string;
  is_current: boolean;
}

export interface Page<T> {
  items: T[];
  total: number;
}

export interface StepResult {
  step_id: string;
  status: string;
  started_at: string;
  ended_at: string;
}

export interface ExecutionRecord {
  execution_id: string;
  playbook_id: string;
  playbook_revision: number;
  status: "ongoing" | "success" | "failed";
  started_at: string;
  ended_at: string | null;
  step_results: StepResult[];
  error: string | null;
}

export interface SharingRecord {
  playbook_id: string;
  playbook_modified: string;
  direction: "outbound" | "inbound";
  collection_id: string;
  stix_object_id: string;
  shared_at: string;
}

export interface ImportResult {
  imported: number;
  skipped: number;
  failures: { id: string; code: string; message: string }[];
}

export interface KpiReport {
  totals: Record<string, number>;
  executions_by_status: Record<string, number>;
  success_rate: number;
  duration_stats: Record<string, number>;
  top_executed: { playbook_id: string; count: number }[];
  label_histogram: Record<string, number>;
  storage: Record<string, number>;
}

export class ApiError extends Error {
  constructor(
    public code: string,
    message: string,
    public httpStatus: number,
    public details?: unknown,
  ) {
    super(message);
  }
}

export class ApiClient {
  requestCounts = new Map<string, number>();

  constructor(public base: string = "") {}

  private count(path: string): void {
    this.requestCounts.set(path, (this.requestCounts.get(path) ?? 0) + 1);
  }

  countFor(path: string): number {
    return this.requestCounts.get(path) ?? 0;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    this.count(path);
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    let response: Response;
    try {
      response = await fetch(this.base + path, init);
    } catch (err) {
      throw new ApiError("CONNECTION", `cannot reach the service: ${String(err)}`, 0);
    }
    const text = await response.text();
    const parsed = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const envelope = parsed as { code?: string; message?: string; details?: unknown } | null;
      throw new ApiError(
        envelope?.code ?? "INTERNAL",
        envelope?.message ?? `request failed with HTTP ${response.status}`,
        response.status,
        envelope?.details,
      );
    }
    return parsed as T;
  }

  listPlaybooks(params: Record<string, string> = {}): Promise<Page<VersionRecord>> {
    const query = new URLSearchParams(params).toString();
    return this.request("GET", `/api/v1/playbooks${query ? "?" + query : ""}`);
  }

  getPlaybook(id: string): Promise<VersionRecord> {
    return this.request("GET", `/api/v1/playbooks/${id}`);
  }

  savePlaybook(doc: Record<string, unknown>): Promise<VersionRecord> {
    return this.request("POST", "/api/v1/playbooks", doc);
  }

  deletePlaybook(id: string): Promise<{ versions_removed: number; sharings_removed: number }> {
    return this.request("DELETE", `/api/v1/playbooks/${id}`);
  }

  history(id: string): Promise<Page<VersionRecord>> {
    return this.request("GET", `/api/v1/playbooks/${id}/history`);
  }

  restore(id: string, revision: number): Promise<VersionRecord> {
    return this.request("POST", `/api/v1/playbooks/${id}/restore`, { revision });
  }

  execute(id: string): Promise<ExecutionRecord> {
    return this.request("POST", `/api/v1/playbooks/${id}/execute`);
  }

  listExecutions(params: Record<string, string> = {}): Promise<Page<ExecutionRecord>> {
    const query = new URLSearchParams(params).toString();
    return this.request("GET", `/api/v1/executions${query ? "?" + query : ""}`);
  }

  share(id: string): Promise<SharingRecord> {
    return this.request("POST", `/api/v1/playbooks/${id}/share`, {});
  }

  importShared(): Promise<ImportResult> {
    return this.request("POST", "/api/v1/sharing/import", {});
  }

  sharingRecords(): Promise<Page<SharingRecord>> {
    return this.request("GET", "/api/v1/sharing/records?limit=200");
  }

  stats(): Promise<KpiReport> {
    return this.request("GET", "/api/v1/stats");
  }

  taxiiCollections(): Promise<{ collections: { id: string; title: string }[] }> {
    return this.request("GET", "/cti/collections/");
  }

  taxiiObjects(collectionId: string): Promise<{ objects: Record<string, any>[] }> {
    return this.request("GET", `/cti/collections/${collectionId}/objects/`);
  }
}

export async function loadRuntimeConfig(): Promise<{ apiBase: string }> {
  try {
    const response = await fetch("/config.json");
    if (response.ok) {
      return (await response.json()) as { apiBase: string };
    }
  } catch {
    // fall through to same-origin default
  }
  return { apiBase: "" };
}
