/**
 * Test support: frozen fixture loading and a fetch interceptor that serves
 * them. Every request the console makes in a test goes through the router,
 * so assertions can check both what was sent and that displayed values came
 * from the payloads and nowhere else.
 */

import { readFileSync } from 'node:fs';
import { resolve } from 'node:path';

const fixturePath = (name: string): string =>
  resolve(process.cwd(), 'tests', 'fixtures', `${name}.json`);

export interface Fixture {
  request: {
    method: string;
    path: string;
    query: Record<string, string>;
    body: unknown;
  };
  status: number;
  response: unknown;
}

export function loadFixture(name: string): Fixture {
  return JSON.parse(readFileSync(fixturePath(name), 'utf-8')) as Fixture;
}

/** Raw fixture file text, for byte-level checks against rendered output. */
export function fixtureText(name: string): string {
  return readFileSync(fixturePath(name), 'utf-8');
}

function canonical(value: unknown): string {
  if (Array.isArray(value)) return `[${value.map(canonical).join(',')}]`;
  if (value !== null && typeof value === 'object') {
    const entries = Object.entries(value as Record<string, unknown>)
      .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
      .map(([k, v]) => `${JSON.stringify(k)}:${canonical(v)}`);
    return `{${entries.join(',')}}`;
  }
  return JSON.stringify(value);
}

export interface RecordedCall {
  url: string;
  path: string;
  query: Record<string, string>;
  body: unknown;
  fixture: string | null;
}

interface PendingHang {
  resolvePayload: (payload: unknown) => void;
  signal: AbortSignal | undefined;
}

export class FetchRouter {
  readonly calls: RecordedCall[] = [];
  private readonly routes: Fixture[] = [];
  private readonly names: string[] = [];
  private hangNext = false;
  readonly hanging: PendingHang[] = [];

  serve(...fixtureNames: string[]): this {
    for (const name of fixtureNames) {
      this.routes.push(loadFixture(name));
      this.names.push(name);
    }
    return this;
  }

  /** Make the next matched request stall until resolved by the test. */
  hangNextRequest(): void {
    this.hangNext = true;
  }

  install(): void {
    globalThis.fetch = ((input: RequestInfo | URL, init?: RequestInit) => {
      const url = String(input);
      const parsed = new URL(url, 'http://console.test');
      const query: Record<string, string> = {};
      parsed.searchParams.forEach((value, key) => {
        query[key] = value;
      });
      const body = init?.body ? JSON.parse(String(init.body)) : undefined;
      const signal = init?.signal ?? undefined;

      const index = this.routes.findIndex(
        (fixture) =>
          fixture.request.path === parsed.pathname &&
          canonical(fixture.request.query) === canonical(query) &&
          canonical(fixture.request.body) === canonical(body),
      );
      const name = index >= 0 ? this.names[index]! : null;
      this.calls.push({ url, path: parsed.pathname, query, body, fixture: name });
      if (index < 0) {
        return Promise.reject(
          new Error(`no fixture for ${parsed.pathname}?${parsed.searchParams} ${canonical(body)}`),
        );
      }
      const fixture = this.routes[index]!;

      const respond = (payload: unknown, status: number) => ({
        ok: status >= 200 && status < 300,
        status,
        json: async () => payload,
      });

      if (this.hangNext) {
        this.hangNext = false;
        return new Promise((resolve, reject) => {
          const abort = () => reject(new DOMException('aborted', 'AbortError'));
          if (signal?.aborted) {
            abort();
            return;
          }
          signal?.addEventListener('abort', abort);
          this.hanging.push({
            resolvePayload: (payload) => resolve(respond(payload, fixture.status)),
            signal,
          });
        }) as Promise<Response>;
      }

      if (signal?.aborted) {
        return Promise.reject(new DOMException('aborted', 'AbortError'));
      }
      return Promise.resolve(respond(fixture.response, fixture.status)) as Promise<Response>;
    }) as typeof fetch;
  }
}

/** Wait for promise callbacks queued by in-flight requests to run. */
export async function settle(): Promise<void> {
  for (let i = 0; i < 10; i += 1) {
    await Promise.resolve();
  }
}
