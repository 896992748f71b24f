/** Typed client for the annotation service; the UI's only data source. */

import type {
  AnnotationRecord,
  ConceptResponse,
  NotesPayload,
  Progress,
  SearchResponse,
  SummaryPayload,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public detail: string,
  ) {
    super(`HTTP ${status}: ${detail}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private baseUrl: string,
    public annotatorId: string,
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const res = await this.fetchImpl(this.baseUrl + path, init);
    if (!res.ok) {
      let detail = res.statusText;
      try {
        detail = ((await res.json()) as { detail?: string }).detail ?? detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(res.status, detail);
    }
    return (await res.json()) as T;
  }

  getNotes(admissionId: string): Promise<NotesPayload> {
    return this.request(`/admissions/${encodeURIComponent(admissionId)}/notes`);
  }

  search(admissionId: string, query: string): Promise<SearchResponse> {
    const q = encodeURIComponent(query);
    return this.request(`/admissions/${encodeURIComponent(admissionId)}/search?q=${q}`);
  }

  conceptMentions(admissionId: string, cui: string): Promise<ConceptResponse> {
    return this.request(
      `/admissions/${encodeURIComponent(admissionId)}/concepts/${encodeURIComponent(cui)}`,
    );
  }

  getSummary(summaryId: string): Promise<SummaryPayload> {
    return this.request(`/summaries/${encodeURIComponent(summaryId)}`);
  }

  postAnnotation(record: AnnotationRecord): Promise<AnnotationRecord> {
    return this.request("/annotations", {
      method: "POST",
      headers: {
        "Content-Type": "application/json",
        "X-Annotator-Id": this.annotatorId,
      },
      body: JSON.stringify(record),
    });
  }

  progress(): Promise<Progress> {
    return this.request("/progress");
  }
}
