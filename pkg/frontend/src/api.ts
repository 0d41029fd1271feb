/** Typed client for the /api/v1 endpoints.  All mutations go through here;
 * the UI holds no authoritative state. */

import {
    AnnotationObjectWire,
    AnnotationRecordWire,
    DocumentWire,
    GraphWire,
    ProfileWire,
    SearchResponseWire,
} from "./model.js";

export class ApiError extends Error {
    code: string;
    status: number;
    detail: Record<string, unknown>;

    constructor(status: number, code: string, message: string, detail: Record<string, unknown>) {
        super(message);
        this.status = status;
        this.code = code;
        this.detail = detail;
    }
}

export interface CreateAnnotationRequest {
    id?: string;
    context: { kind: string; note: string };
    target: { tier: string; id: string };
    annotator: string;
    semantic_function: string;
    object: AnnotationObjectWire;
    dimensions?: Record<string, string>;
}

export class ApiClient {
    base: string;
    fetcher: typeof fetch;

    constructor(base = "", fetcher: typeof fetch = fetch) {
        this.base = base.replace(/\/$/, "");
        this.fetcher = fetcher;
    }

    private async request<T>(path: string, init?: RequestInit): Promise<T> {
        const response = await this.fetcher(`${this.base}/api/v1${path}`, init);
        const body = await response.json().catch(() => null);
        if (!response.ok) {
            const error = (body as { error?: { code: string; message: string; detail: Record<string, unknown> } })?.error;
            throw new ApiError(
                response.status,
                error?.code ?? "InternalError",
                error?.message ?? `HTTP ${response.status}`,
                error?.detail ?? {},
            );
        }
        return body as T;
    }

    health(): Promise<{ status: string; format: string; version: number; annotations: number }> {
        return this.request("/health");
    }

    listDocuments(): Promise<{ documents: DocumentWire[]; version: number }> {
        return this.request("/documents");
    }

    listProfiles(): Promise<{ profiles: ProfileWire[]; version: number }> {
        return this.request("/profiles");
    }

    graph(documentId: string): Promise<GraphWire> {
        return this.request(`/graph/${encodeURIComponent(documentId)}`);
    }

    getAnnotation(id: string): Promise<{ annotation: AnnotationRecordWire; version: number }> {
        return this.request(`/annotations/${encodeURIComponent(id)}`);
    }

    search(q: string, strict = false, match: "subset" | "any" = "subset"): Promise<SearchResponseWire> {
        const params = new URLSearchParams({ q, strict: String(strict), match });
        return this.request(`/search?${params.toString()}`);
    }

    createAnnotation(body: CreateAnnotationRequest, expectVersion?: number): Promise<{ id: string; version: number }> {
        const suffix = expectVersion === undefined ? "" : `?expect_version=${expectVersion}`;
        return this.request(`/annotations${suffix}`, {
            method: "POST",
            headers: { "content-type": "application/json" },
            body: JSON.stringify(body),
        });
    }

    explicitate(body: { attribute?: string; values?: unknown[]; scope?: { tier: string; id: string } }) {
        return this.request<{ candidates: unknown[]; resolved: boolean; version: number }>(
            "/explicitate",
            {
                method: "POST",
                headers: { "content-type": "application/json" },
                body: JSON.stringify(body),
            },
        );
    }
}
