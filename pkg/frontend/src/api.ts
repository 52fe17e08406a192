/* Typed client for the wrec HTTP service.
 *
 * Every endpoint returns canonical JSON built server-side; this module only
 * decodes it. The fetch function is injectable so tests can route requests
 * to fixture payloads without a network.
 */

export interface EnumDomain {
  kind: 'enum';
  values: string[];
}

export interface RangeDomain {
  kind: 'range';
  lo: number;
  hi: number;
}

export type Domain = EnumDomain | RangeDomain;

export interface Question {
  name: string;
  domain: Domain;
  keep: boolean;
}

export interface KbSummary {
  source: string;
  questions: Question[];
  products: string[];
  tests: string[];
}

/** One (variable, value) pair; array order is the entry order. */
export interface RequirementEntry {
  var: string;
  value: string | number;
}

export interface RepairProposal {
  changes: Record<string, string | number>;
  items: string[];
  support: string;
  support_value: number;
}

export interface DiagnosisGroup {
  remove: string[];
  repairs: RepairProposal[];
}

export type RecommendationResponse =
  | { status: 'solutions'; items: string[] }
  | { status: 'repairs'; diagnoses: DiagnosisGroup[] }
  | { status: 'unrepairable' };

export interface TestRow {
  name: string;
  status: 'pass' | 'fail';
  show: boolean;
}

export interface TestRunResponse {
  results: TestRow[];
}

export interface ConstraintText {
  id: string;
  text: string;
}

export interface KbDiagnosisGroup {
  constraints: ConstraintText[];
}

export interface KbDiagnosisResponse {
  diagnoses: KbDiagnosisGroup[];
  all_pass: boolean;
}

export interface RecommendOptions {
  item?: string;
  n?: number;
}

/** The subset of the fetch Response surface the client relies on. */
export interface HttpResponse {
  ok: boolean;
  status: number;
  text(): Promise<string>;
}

export interface HttpRequestInit {
  method?: string;
  headers?: Record<string, string>;
  body?: string;
}

export type FetchLike = (url: string, init?: HttpRequestInit) => Promise<HttpResponse>;

const defaultFetch: FetchLike = (url, init) => globalThis.fetch(url, init);

export class ApiError extends Error {
  constructor(
    public status: number,
    message: string,
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

function errorMessage(status: number, body: string): string {
  try {
    const parsed = JSON.parse(body);
    if (parsed && typeof parsed.error === 'string') {
      return parsed.error;
    }
    if (parsed && typeof parsed.message === 'string') {
      // Parse failures come back as {line, column, message, kind}.
      return `${parsed.line}:${parsed.column}: ${parsed.message}`;
    }
  } catch {
    // fall through to the generic message
  }
  return `request failed with status ${status}`;
}

export class ApiClient {
  constructor(
    private baseUrl: string = '',
    private fetchFn: FetchLike = defaultFetch,
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: HttpRequestInit = { method };
    if (body !== undefined) {
      init.headers = { 'content-type': 'application/json' };
      init.body = JSON.stringify(body);
    }
    let response: HttpResponse;
    try {
      response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    } catch (err) {
      throw new ApiError(0, `service unreachable: ${err instanceof Error ? err.message : err}`);
    }
    const text = await response.text();
    if (!response.ok) {
      throw new ApiError(response.status, errorMessage(response.status, text));
    }
    return JSON.parse(text) as T;
  }

  getKb(name: string): Promise<KbSummary> {
    return this.request<KbSummary>('GET', `/kb/${name}`);
  }

  async putKb(name: string, source: string): Promise<number> {
    const init: HttpRequestInit = {
      method: 'PUT',
      headers: { 'content-type': 'text/plain; charset=utf-8' },
      body: source,
    };
    const response = await this.fetchFn(`${this.baseUrl}/kb/${name}`, init);
    const text = await response.text();
    if (!response.ok) {
      throw new ApiError(response.status, errorMessage(response.status, text));
    }
    return (JSON.parse(text) as { version: number }).version;
  }

  recommend(
    name: string,
    requirements: RequirementEntry[],
    options: RecommendOptions = {},
  ): Promise<RecommendationResponse> {
    const body: Record<string, unknown> = { requirements };
    if (options.item !== undefined) {
      body.item = options.item;
    }
    if (options.n !== undefined) {
      body.n = options.n;
    }
    return this.request<RecommendationResponse>('POST', `/kb/${name}/recommend`, body);
  }

  runTests(name: string): Promise<TestRunResponse> {
    return this.request<TestRunResponse>('POST', `/kb/${name}/tests/run`);
  }

  diagnoseKb(name: string, ordering?: string): Promise<KbDiagnosisResponse> {
    const body: Record<string, unknown> = {};
    if (ordering !== undefined) {
      body.ordering = ordering;
    }
    return this.request<KbDiagnosisResponse>('POST', `/kb/${name}/diagnose`, body);
  }
}
