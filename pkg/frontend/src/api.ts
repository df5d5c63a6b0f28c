/** Thin client for the dialogue service; the console's only data source. */

import type { Reply } from "./types.js";

export type FetchLike = (
  input: string,
  init?: { method?: string; headers?: Record<string, string>; body?: string },
) => Promise<{ status: number; json(): Promise<unknown>; text(): Promise<string> }>;

export class ApiError extends Error {
  constructor(message: string, readonly status: number) {
    super(message);
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchImpl: FetchLike = fetch as unknown as FetchLike,
  ) {}

  private url(path: string): string {
    return this.baseUrl.replace(/\/$/, "") + path;
  }

  async createSession(): Promise<string> {
    const response = await this.fetchImpl(this.url("/sessions"), {
      method: "POST",
    });
    if (response.status !== 201) {
      throw new ApiError(`cannot create session`, response.status);
    }
    const body = (await response.json()) as { session: string };
    return body.session;
  }

  async deleteSession(session: string): Promise<void> {
    await this.fetchImpl(this.url(`/sessions/${session}`), { method: "DELETE" });
  }

  /** Commands answer with a Reply even on 4xx; transport failures throw. */
  async sendCommand(session: string, command: string): Promise<Reply> {
    const response = await this.fetchImpl(
      this.url(`/sessions/${session}/command`),
      {
        method: "POST",
        headers: { "content-type": "application/json" },
        body: JSON.stringify({ command }),
      },
    );
    const body = (await response.json()) as Reply;
    if (typeof body !== "object" || body === null || !("kind" in body)) {
      throw new ApiError("malformed reply", response.status);
    }
    return body;
  }

  async fetchTranscript(session: string): Promise<string> {
    const response = await this.fetchImpl(
      this.url(`/sessions/${session}/transcript`),
    );
    if (response.status !== 200) {
      throw new ApiError("cannot fetch transcript", response.status);
    }
    return response.text();
  }
}
