// Thin fetch wrapper over the game service.  No retries, no caching: the
// board must only ever show what the server last said.

import {
    ErrorBodyJson,
    GameConfigJson,
    HintJson,
    IntervalJson,
    SnapshotJson,
    ViolationJson,
} from "./types.js";

export class ApiError extends Error {
    status: number;
    violation: ViolationJson | null;

    constructor(status: number, detail: string, violation: ViolationJson | null) {
        super(detail);
        this.status = status;
        this.violation = violation;
    }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
    private base: string;
    private fetchImpl: FetchLike;

    constructor(baseUrl: string, fetchImpl?: FetchLike) {
        this.base = baseUrl.replace(/\/+$/, "");
        this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
    }

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const init: RequestInit = { method, headers: {} };
        if (body !== undefined) {
            init.headers = { "Content-Type": "application/json" };
            init.body = JSON.stringify(body);
        }
        const response = await this.fetchImpl(this.base + path, init);
        if (!response.ok) {
            let detail = `${response.status}`;
            let violation: ViolationJson | null = null;
            try {
                const parsed = (await response.json()) as ErrorBodyJson;
                if (typeof parsed.detail === "string") detail = parsed.detail;
                violation = parsed.violation ?? null;
            } catch {
                // non-JSON error body, keep the bare status text
            }
            throw new ApiError(response.status, detail, violation);
        }
        return (await response.json()) as T;
    }

    health(): Promise<{ status: string; games: number }> {
        return this.request("GET", "/health");
    }

    createGame(config: GameConfigJson): Promise<SnapshotJson> {
        return this.request("POST", "/games", config);
    }

    getGame(gameId: string): Promise<SnapshotJson> {
        return this.request("GET", `/games/${gameId}`);
    }

    /** Player A presents a batch; with a server-side engine B the same
     *  response already carries the answer (or the A-wins terminal). */
    postMove(gameId: string, intervals: IntervalJson[]): Promise<SnapshotJson> {
        return this.request("POST", `/games/${gameId}/moves`, { intervals });
    }

    postColouring(gameId: string, assignment: IntervalJson[]): Promise<SnapshotJson> {
        return this.request("POST", `/games/${gameId}/colourings`, { assignment });
    }

    hint(gameId: string): Promise<HintJson> {
        return this.request("GET", `/games/${gameId}/hint`);
    }

    concede(gameId: string, actor: "A" | "B"): Promise<SnapshotJson> {
        return this.request("POST", `/games/${gameId}/concede`, { actor });
    }
}
