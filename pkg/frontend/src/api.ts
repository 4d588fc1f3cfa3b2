export type Judgment = 'REAL' | 'SYNTH' | 'SKIP';

export interface CreateSessionResponse {
  session_id: string;
  total: number;
}

export interface NextItemPayload {
  done: boolean;
  rated: number;
  total: number;
  item_id?: string;
  image_ref?: string;
  image_url?: string;
}

export interface MatrixCounts {
  real_judged_real: number;
  real_judged_synth: number;
  synth_judged_real: number;
  synth_judged_synth: number;
}

export interface SessionReport {
  rater_id: string;
  matrix: MatrixCounts;
  skipped: number;
  unrated: number;
  total_rated: number;
  accuracy: number;
}

export class ApiError extends Error {
  constructor(public status: number, message: string) {
    super(message);
  }
}

/** Thin typed wrapper over the rating-service JSON endpoints. */
export class TuringClient {
  constructor(private baseUrl: string, private fetchFn: typeof fetch = fetch) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!resp.ok) {
      const body = await resp.text();
      throw new ApiError(resp.status, `${resp.status} on ${path}: ${body}`);
    }
    return (await resp.json()) as T;
  }

  createSession(realRefs: string[], synthRefs: string[], raterId: string,
                seed = 0): Promise<CreateSessionResponse> {
    return this.request('/sessions', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({
        real_refs: realRefs, synth_refs: synthRefs,
        rater_id: raterId, seed,
      }),
    });
  }

  nextItem(sessionId: string): Promise<NextItemPayload> {
    return this.request(`/sessions/${sessionId}/next`);
  }

  submitRating(sessionId: string, itemId: string,
               judgment: Judgment): Promise<{ ok: boolean; rated: number; total: number }> {
    return this.request(`/sessions/${sessionId}/ratings`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ item_id: itemId, judgment }),
    });
  }

  closeSession(sessionId: string): Promise<SessionReport> {
    return this.request(`/sessions/${sessionId}/close`, { method: 'POST' });
  }

  report(sessionId: string): Promise<SessionReport> {
    return this.request(`/sessions/${sessionId}/report`);
  }

  imageUrl(payload: NextItemPayload): string {
    return payload.image_url ? `${this.baseUrl}${payload.image_url}` : '';
  }
}
