/** Thin client over the session-service HTTP API. The server is
 * authoritative for everything: goals, palettes, verdicts, traces,
 * frames. No kernel logic lives in the browser. */

import type {
  CommandResponse,
  EventJson,
  ExerciseJson,
  ReplayLogJson,
  SessionJson,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string,
  ) {
    super(message);
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  const response = await fetch(url, {
    headers: { "content-type": "application/json" },
    ...init,
  });
  if (!response.ok) {
    let code = "HttpError";
    let message = response.statusText;
    try {
      const body = (await response.json()) as { error?: string; message?: string };
      code = body.error ?? code;
      message = body.message ?? message;
    } catch {
      // not JSON: keep the status text
    }
    throw new ApiError(response.status, code, message);
  }
  return (await response.json()) as T;
}

export class ApiClient {
  constructor(readonly base: string = "") {}

  listExercises(): Promise<{ exercises: ExerciseJson[] }> {
    return request(`${this.base}/exercises`);
  }

  createSession(exerciseId: string, studentId: string): Promise<SessionJson> {
    return request(`${this.base}/sessions`, {
      method: "POST",
      body: JSON.stringify({ exercise_id: exerciseId, student_id: studentId }),
    });
  }

  getSession(sessionId: string): Promise<SessionJson> {
    return request(`${this.base}/sessions/${sessionId}`);
  }

  sendCommand(sessionId: string, command: string): Promise<CommandResponse> {
    return request(`${this.base}/sessions/${sessionId}/commands`, {
      method: "POST",
      body: JSON.stringify({ command }),
    });
  }

  undo(sessionId: string): Promise<CommandResponse> {
    return request(`${this.base}/sessions/${sessionId}/undo`, { method: "POST" });
  }

  replay(sessionId: string): Promise<ReplayLogJson> {
    return request(`${this.base}/sessions/${sessionId}/replay`);
  }

  async exportScript(sessionId: string): Promise<string> {
    const response = await fetch(`${this.base}/sessions/${sessionId}/export?form=script`);
    if (!response.ok) {
      throw new ApiError(response.status, "HttpError", response.statusText);
    }
    return response.text();
  }
}
