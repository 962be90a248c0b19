// Opening book for the staged-chain preset.
//
// The layout lives here only so the client can hand the server a ready-made
// script when creating a preset game; the server re-validates every move, so
// nothing below is authoritative.  With d = 2**a colours and target ratio
// 1/n, a nested chain of intervals is anchored at the level-(j-a) interval
// with the given index.  d-1 leaves are marked inside the deepest chain
// interval and one leaf inside the brother of each chain interval.  The
// opening batch is the d-1 marks plus the outermost brother leaf; each later
// move adds the next brother leaf inward.  Playing the script to the end
// leaves the engine with no balanced answer.

import { EtaJson, GameConfigJson, IntervalJson } from "./types.js";

export interface ChainPreset {
    a: number;
    n: number;
    j: number;
    anchor: number;
    config: GameConfigJson;
}

function leaf(j: number, index: number): IntervalJson {
    return { level: j, index };
}

export function chainPreset(a: number, n: number, j: number, anchor = 0): ChainPreset {
    if (!Number.isInteger(a) || a < 1) throw new Error(`a must be a positive integer, got ${a}`);
    if (!Number.isInteger(n) || n < 2) throw new Error(`n must be at least 2, got ${n}`);
    if (!Number.isInteger(j) || j < n + a + 1) {
        throw new Error(`j must be at least n + a + 1 = ${n + a + 1}, got ${j}`);
    }
    if (j > 30) throw new Error(`j must not exceed 30, got ${j}`);
    if (!Number.isInteger(anchor) || anchor < 0 || anchor >= 1 << (j - a)) {
        throw new Error(`anchor must be in [0, 2**${j - a}), got ${anchor}`);
    }

    const d = 1 << a;
    const eta: EtaJson = { num: 1, den: n };

    // chain[i] is the level-(j-a-i) interval; brothers[i] its sibling
    const chainIndex: number[] = [anchor];
    for (let i = 0; i < n + 1; i++) {
        chainIndex.push(chainIndex[i] >> 1);
    }
    const marks: IntervalJson[] = [];
    for (let slot = 0; slot < d - 1; slot++) {
        marks.push(leaf(j, (anchor << a) + slot));
    }
    const brotherLeaves: IntervalJson[] = [];
    for (let i = 1; i <= n + 1; i++) {
        const brother = chainIndex[i - 1] ^ 1;
        brotherLeaves.push(leaf(j, brother << (a + i - 1)));
    }

    const opening = [...marks, brotherLeaves[n]].sort((x, y) => x.index - y.index);
    const script: IntervalJson[][] = [opening];
    for (let k = 1; k <= n; k++) {
        script.push([brotherLeaves[n - k]]);
    }

    return {
        a, n, j, anchor,
        config: { j, d, eta, restricted: false, engine_b: true, script },
    };
}

/** Config for a plain game with no script: human A against the colouring engine. */
export function blankConfig(
    j: number, d: number, eta: EtaJson, restricted: boolean, engineB = true,
): GameConfigJson {
    return { j, d, eta, restricted, engine_b: engineB, script: [] };
}
