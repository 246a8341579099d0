/** Thin fetch wrapper around the simulation service endpoints. */

import type { StateView } from "./model.js";

export class ApiError extends Error {
  readonly status: number;
  readonly code: string;
  readonly blocking: string[];

  constructor(status: number, detail: Record<string, unknown> | null) {
    const code = (detail?.error as string) ?? "request-failed";
    super(`${code} (${status})`);
    this.status = status;
    this.code = code;
    this.blocking = Array.isArray(detail?.blocking) ? (detail.blocking as string[]) : [];
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, init);
  if (!response.ok) {
    let detail: Record<string, unknown> | null = null;
    try {
      const body = (await response.json()) as { detail?: Record<string, unknown> };
      detail = body.detail ?? null;
    } catch {
      detail = null;
    }
    throw new ApiError(response.status, detail);
  }
  return (await response.json()) as T;
}

export interface LtsView {
  states: { executed: string[]; pending: string[]; included: string[]; accepting: boolean }[];
  transitions: { from: number; to: number; event: string; action: string }[];
  truncated: boolean;
}

export class ServiceClient {
  constructor(readonly baseUrl: string) {}

  createSession(document: unknown): Promise<StateView> {
    return request<StateView>(`${this.baseUrl}/sessions`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(document),
    });
  }

  getState(sessionId: string): Promise<StateView> {
    return request<StateView>(`${this.baseUrl}/sessions/${sessionId}`);
  }

  executeEvent(sessionId: string, principal: string, event: string): Promise<StateView> {
    return request<StateView>(`${this.baseUrl}/sessions/${sessionId}/events`, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify({ principal, event }),
    });
  }

  undo(sessionId: string): Promise<StateView> {
    return request<StateView>(`${this.baseUrl}/sessions/${sessionId}/undo`, {
      method: "POST",
    });
  }

  fetchLts(sessionId: string, maxStates = 200): Promise<LtsView> {
    return request<LtsView>(
      `${this.baseUrl}/sessions/${sessionId}/lts?maxStates=${maxStates}`,
    );
  }

  async healthy(): Promise<boolean> {
    try {
      const body = await request<{ status: string }>(`${this.baseUrl}/healthz`);
      return body.status === "ok";
    } catch {
      return false;
    }
  }
}
