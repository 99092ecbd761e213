import type {
  ApiErrorBody,
  CreateSessionRequest,
  PresetInfo,
  SessionView,
} from './types.js';

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    readonly phase: string | null,
    message: string,
  ) {
    super(message);
  }
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

/** Thin typed client over the session endpoints. */
export class ApiClient {
  constructor(
    private readonly baseUrl: string = '',
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let body: Partial<ApiErrorBody> = {};
      try {
        body = (await response.json()) as ApiErrorBody;
      } catch {
        // non-JSON error body; keep defaults
      }
      throw new ApiError(
        response.status,
        body.code ?? 'http_error',
        body.phase ?? null,
        body.message ?? `request failed with status ${response.status}`,
      );
    }
    return (await response.json()) as T;
  }

  listPresets(): Promise<PresetInfo[]> {
    return this.request<PresetInfo[]>('/presets');
  }

  createSession(body: CreateSessionRequest): Promise<SessionView> {
    return this.request<SessionView>('/sessions', {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify(body),
    });
  }

  getSession(id: string): Promise<SessionView> {
    return this.request<SessionView>(`/sessions/${id}`);
  }

  submitAction(id: string, column: number): Promise<SessionView> {
    return this.request<SessionView>(`/sessions/${id}/action`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ column }),
    });
  }

  declareLearned(id: string, learned: boolean): Promise<SessionView> {
    return this.request<SessionView>(`/sessions/${id}/learned`, {
      method: 'POST',
      headers: { 'Content-Type': 'application/json' },
      body: JSON.stringify({ learned }),
    });
  }

  async fetchTranscriptCsv(id: string): Promise<string> {
    const response = await this.fetchImpl(`${this.baseUrl}/sessions/${id}/transcript.csv`);
    if (!response.ok) {
      throw new ApiError(response.status, 'http_error', null, 'transcript fetch failed');
    }
    return response.text();
  }
}
