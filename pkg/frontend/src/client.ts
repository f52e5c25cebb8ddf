// Thin typed client for the previewd wire protocol.

export interface Diagnostic {
  line: number;
  col: number;
  severity: "info" | "warning" | "error";
  code: string;
  message: string;
}

export interface AnswerEntry {
  index: number;
  label: string | null;
  spacemath: string;
  latex: string;
  line: number;
}

export type WantField = "html" | "diagnostics" | "answers";

export interface RenderRequest {
  source: string;
  calc_enabled: boolean;
  want: WantField[];
}

export interface RenderResponse {
  html?: string;
  diagnostics: Diagnostic[];
  answers?: AnswerEntry[];
  elapsed_ms: number;
}

export interface HealthResponse {
  status: string;
  version: string;
}

export class PreviewClient {
  constructor(
    private readonly baseUrl: string,
    private readonly fetchFn: typeof fetch = fetch,
  ) {}

  async render(request: RenderRequest): Promise<RenderResponse> {
    const resp = await this.fetchFn(`${this.baseUrl}/v1/render`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(request),
    });
    if (!resp.ok) {
      throw new Error(`render failed: HTTP ${resp.status}`);
    }
    return (await resp.json()) as RenderResponse;
  }

  async health(): Promise<HealthResponse> {
    const resp = await this.fetchFn(`${this.baseUrl}/v1/health`);
    if (!resp.ok) {
      throw new Error(`health failed: HTTP ${resp.status}`);
    }
    return (await resp.json()) as HealthResponse;
  }
}
