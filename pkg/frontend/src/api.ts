import type { FetchLike, NextResponse, SessionRecord, Suggestion, TraceAction } from './types.js';

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

async function expectJson<T>(resp: Response): Promise<T> {
  if (!resp.ok) {
    let code = 'unknown';
    let message = resp.statusText;
    try {
      const body = await resp.json();
      code = body.code ?? code;
      message = body.message ?? message;
    } catch {
      // non-JSON error body; keep the status text
    }
    throw new ApiError(resp.status, code, message);
  }
  return (await resp.json()) as T;
}

/** Thin client over the session service; the fetch implementation is injected
 * so tests can run against an in-memory fixture service. */
export class ApiClient {
  constructor(
    private baseUrl: string,
    private fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  getSession(sessionId: string): Promise<SessionRecord> {
    return this.request<SessionRecord>('GET', `/sessions/${sessionId}`);
  }

  getActions(sessionId: string): Promise<{ actions: TraceAction[] }> {
    return this.request('GET', `/sessions/${sessionId}/actions`);
  }

  nextSuggestion(sessionId: string): Promise<NextResponse> {
    return this.request('POST', `/sessions/${sessionId}/suggestions/next`);
  }

  revealedSuggestions(sessionId: string): Promise<{ items: Suggestion[] }> {
    return this.request('GET', `/sessions/${sessionId}/suggestions`);
  }

  private async request<T>(method: string, path: string): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path, { method });
    return expectJson<T>(resp);
  }
}
