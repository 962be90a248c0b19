// Wire shapes, mirroring the service JSON byte for byte.

export interface IntervalJson {
    level: number;
    index: number;
    colour?: number;
}

export interface EtaJson {
    num: number;
    den: number;
}

export interface GameConfigJson {
    j: number;
    d: number;
    eta: EtaJson;
    restricted: boolean;
    engine_b: boolean;
    script: IntervalJson[][];
}

export interface BoardJson {
    j: number;
    d: number;
    eta: EtaJson;
    intervals: IntervalJson[];
}

export interface ViolationJson {
    kind: "HOM1" | "HOM2" | "PREVIS";
    testing_interval: IntervalJson;
    detail: Record<string, unknown>;
}

export interface MoveJson {
    actor: "A" | "B";
    intervals?: IntervalJson[];
    assignment?: IntervalJson[];
}

export type GameStatusValue = "awaiting_A" | "awaiting_B" | "A_wins" | "B_wins";

/** The GET /games/{id} snapshot plus the service's own two fields. */
export interface SnapshotJson {
    config: GameConfigJson;
    status: GameStatusValue;
    stage: number;
    board: BoardJson;
    pending: IntervalJson[] | null;
    moves: MoveJson[];
    game_id: string;
    state_hash: string;
}

export interface HintJson {
    intervals: IntervalJson[] | null;
}

export interface ErrorBodyJson {
    detail: string;
    violation?: ViolationJson | null;
}

export function sameInterval(a: IntervalJson, b: IntervalJson): boolean {
    return a.level === b.level && a.index === b.index;
}

export function intervalKey(iv: IntervalJson): string {
    return `${iv.level}:${iv.index}`;
}
