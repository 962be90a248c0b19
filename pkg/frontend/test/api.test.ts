import { describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";

interface Call {
    url: string;
    method: string;
    body: unknown;
}

function stubClient(status: number, payload: unknown): { client: ApiClient; calls: Call[] } {
    const calls: Call[] = [];
    const fetchImpl = async (url: string, init?: RequestInit) => {
        calls.push({
            url,
            method: init?.method ?? "GET",
            body: init?.body ? JSON.parse(init.body as string) : undefined,
        });
        return new Response(JSON.stringify(payload), {
            status,
            headers: { "Content-Type": "application/json" },
        });
    };
    return { client: new ApiClient("http://server:1/", fetchImpl), calls };
}

describe("ApiClient", () => {
    it("strips trailing slashes and hits the expected routes", async () => {
        const { client, calls } = stubClient(200, { intervals: null });
        await client.hint("g-7");
        expect(calls[0].url).toBe("http://server:1/games/g-7/hint");
        expect(calls[0].method).toBe("GET");
        expect(calls[0].body).toBeUndefined();
    });

    it("posts moves as an intervals list", async () => {
        const { client, calls } = stubClient(200, { fake: true });
        await client.postMove("g", [{ level: 3, index: 5 }]);
        expect(calls[0]).toEqual({
            url: "http://server:1/games/g/moves",
            method: "POST",
            body: { intervals: [{ level: 3, index: 5 }] },
        });
    });

    it("posts colourings under the assignment key", async () => {
        const { client, calls } = stubClient(200, { fake: true });
        await client.postColouring("g", [{ level: 3, index: 5, colour: 2 }]);
        expect(calls[0].url).toBe("http://server:1/games/g/colourings");
        expect(calls[0].body).toEqual({ assignment: [{ level: 3, index: 5, colour: 2 }] });
    });

    it("turns error bodies into ApiError with the violation attached", async () => {
        const violation = {
            kind: "HOM1",
            testing_interval: { level: 1, index: 0 },
            detail: { colour: 1, count: 2 },
        };
        const { client } = stubClient(409, { detail: "bad colouring", violation });
        const err = await client.postColouring("g", []).catch((e) => e as ApiError);
        expect(err).toBeInstanceOf(ApiError);
        expect(err.status).toBe(409);
        expect(err.message).toBe("bad colouring");
        expect(err.violation).toEqual(violation);
    });

    it("copes with non-JSON error bodies", async () => {
        const fetchImpl = async () => new Response("boom", { status: 503 });
        const client = new ApiClient("http://server:1", fetchImpl);
        const err = await client.health().catch((e) => e as ApiError);
        expect(err).toBeInstanceOf(ApiError);
        expect(err.status).toBe(503);
        expect(err.violation).toBeNull();
    });

    it("sends the whole config when creating a game", async () => {
        const { client, calls } = stubClient(201, { fake: true });
        const config = {
            j: 2, d: 2, eta: { num: 1, den: 2 },
            restricted: false, engine_b: true, script: [],
        };
        await client.createGame(config);
        expect(calls[0].body).toEqual(config);
    });
});
