// Recorded click scripts: flat lists of user gestures that can be replayed
// against the live DOM.  The end-to-end test drives the preset duel with one
// of these instead of a human.

export type ClickAction =
    | { kind: "set"; id: string; value: string }
    | { kind: "click"; id: string };

/** The gestures a human would make to play the staged-chain preset to the
 *  end: fill in the preset form, start the game, then follow the hint for
 *  each of the n + 1 scripted batches.  The last submit ends the game. */
export function presetDuelScript(a: number, n: number, j: number): ClickAction[] {
    const actions: ClickAction[] = [
        { kind: "set", id: "preset-a", value: String(a) },
        { kind: "set", id: "preset-n", value: String(n) },
        { kind: "set", id: "preset-j", value: String(j) },
        { kind: "click", id: "new-preset" },
    ];
    for (let move = 0; move < n + 1; move++) {
        actions.push({ kind: "click", id: "hint" });
        actions.push({ kind: "click", id: "submit-move" });
    }
    return actions;
}

function sleep(ms: number): Promise<void> {
    return new Promise((resolve) => setTimeout(resolve, ms));
}

/** Resolves once the app has no request in flight (body carries a busy
 *  marker while one is). */
export function idleWaiter(doc: Document, timeoutMs = 10000): () => Promise<void> {
    return async () => {
        const deadline = Date.now() + timeoutMs;
        while (doc.body.dataset.busy) {
            if (Date.now() > deadline) throw new Error("app stayed busy too long");
            await sleep(5);
        }
    };
}

export async function runClickScript(
    doc: Document,
    actions: ClickAction[],
    waitIdle: () => Promise<void>,
): Promise<void> {
    for (const action of actions) {
        const el = doc.getElementById(action.id);
        if (!el) throw new Error(`script target #${action.id} not in the page`);
        if (action.kind === "set") {
            (el as HTMLInputElement).value = action.value;
        } else {
            (el as HTMLElement).click();
            await waitIdle();
        }
    }
}
