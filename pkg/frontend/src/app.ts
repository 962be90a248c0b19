// Application controller.  Holds the last server snapshot and re-renders
// from it; every user action is one request, and nothing changes on screen
// until the server answers (optimistic UI deliberately off).

import { ApiClient, ApiError } from "./api.js";
import { BoardView, describeViolation, renderBoard, viewFromSnapshot } from "./board.js";
import { blankConfig, chainPreset } from "./preset.js";
import { IntervalJson, SnapshotJson, ViolationJson, intervalKey } from "./types.js";

type Seat = "A" | "B";

function parseEta(text: string): { num: number; den: number } {
    const match = /^\s*(\d+)\s*\/\s*(\d+)\s*$/.exec(text);
    if (!match) throw new Error(`ratio must look like 1/2, got "${text}"`);
    return { num: Number(match[1]), den: Number(match[2]) };
}

export class App {
    readonly doc: Document;
    readonly api: ApiClient;

    snapshot: SnapshotJson | null = null;
    seat: Seat = "A";
    selection = new Set<number>();
    picks = new Map<string, number>();
    paint = 1;
    violation: ViolationJson | null = null;
    notice = "";
    private busy = false;

    constructor(doc: Document, api: ApiClient) {
        this.doc = doc;
        this.api = api;
        this.wire("new-preset", () => this.newPreset());
        this.wire("new-blank", () => this.newBlank());
        this.wire("submit-move", () => this.submitMove());
        this.wire("clear-selection", () => {
            this.selection.clear();
            this.render();
        });
        this.wire("hint", () => this.applyHint());
        this.wire("submit-colours", () => this.submitColours());
        this.wire("concede", () => this.concede());
        this.render();
    }

    isBusy(): boolean {
        return this.busy;
    }

    private byId<T extends HTMLElement>(id: string): T {
        const el = this.doc.getElementById(id);
        if (!el) throw new Error(`missing element #${id}`);
        return el as T;
    }

    private wire(id: string, handler: () => void): void {
        this.byId(id).addEventListener("click", handler);
    }

    private async run(action: () => Promise<void>): Promise<void> {
        if (this.busy) return;
        this.busy = true;
        this.doc.body.dataset.busy = "1";
        this.notice = "";
        try {
            await action();
        } catch (err) {
            if (err instanceof ApiError) {
                this.violation = err.violation;
                this.notice = err.message;
            } else {
                this.violation = null;
                this.notice = `request failed: ${(err as Error).message}`;
            }
        } finally {
            this.busy = false;
            delete this.doc.body.dataset.busy;
            this.render();
        }
    }

    private adopt(snapshot: SnapshotJson): void {
        this.snapshot = snapshot;
        this.selection.clear();
        this.picks.clear();
        this.violation = null;
    }

    newPreset(): Promise<void> {
        return this.run(async () => {
            const a = this.numberInput("preset-a");
            const n = this.numberInput("preset-n");
            const j = this.numberInput("preset-j");
            const preset = chainPreset(a, n, j);
            this.seat = "A";
            this.adopt(await this.api.createGame(preset.config));
            this.notice = "preset game ready, use the hint button to follow the winning script";
        });
    }

    newBlank(): Promise<void> {
        return this.run(async () => {
            const j = this.numberInput("blank-j");
            const d = this.numberInput("blank-d");
            const eta = parseEta(this.byId<HTMLInputElement>("blank-eta").value);
            const restricted = this.byId<HTMLInputElement>("blank-restricted").checked;
            this.seat = this.byId<HTMLSelectElement>("seat").value === "B" ? "B" : "A";
            const config = blankConfig(j, d, eta, restricted, this.seat === "A");
            this.adopt(await this.api.createGame(config));
            if (this.seat === "B") await this.driveA();
        });
    }

    private numberInput(id: string): number {
        return Number(this.byId<HTMLInputElement>(id).value);
    }

    /** In the human-B seat the presenter is driven from the server's hint. */
    private async driveA(): Promise<void> {
        const snapshot = this.snapshot;
        if (!snapshot || snapshot.status !== "awaiting_A") return;
        const hint = await this.api.hint(snapshot.game_id);
        if (!hint.intervals) return;
        this.adopt(await this.api.postMove(snapshot.game_id, hint.intervals));
    }

    submitMove(): Promise<void> {
        return this.run(async () => {
            const snapshot = this.requireGame("awaiting_A");
            if (this.selection.size === 0) throw new Error("select at least one interval");
            const intervals: IntervalJson[] = [...this.selection]
                .sort((x, y) => x - y)
                .map((index) => ({ level: snapshot.config.j, index }));
            this.adopt(await this.api.postMove(snapshot.game_id, intervals));
        });
    }

    applyHint(): Promise<void> {
        return this.run(async () => {
            const snapshot = this.requireGame("awaiting_A");
            const hint = await this.api.hint(snapshot.game_id);
            if (!hint.intervals) {
                this.notice = "no batch left, the row is full";
                return;
            }
            this.selection = new Set(hint.intervals.map((iv) => iv.index));
        });
    }

    submitColours(): Promise<void> {
        return this.run(async () => {
            const snapshot = this.requireGame("awaiting_B");
            const pending = snapshot.pending ?? [];
            const assignment: IntervalJson[] = [];
            for (const iv of pending) {
                const pick = this.picks.get(intervalKey(iv));
                if (pick === undefined) {
                    throw new Error("every hatched interval needs a colour first");
                }
                assignment.push({ ...iv, colour: pick });
            }
            this.adopt(await this.api.postColouring(snapshot.game_id, assignment));
            if (this.seat === "B") await this.driveA();
        });
    }

    concede(): Promise<void> {
        return this.run(async () => {
            const snapshot = this.requireGame();
            this.adopt(await this.api.concede(snapshot.game_id, this.seat));
        });
    }

    private requireGame(status?: string): SnapshotJson {
        if (!this.snapshot) throw new Error("no game yet");
        if (status && this.snapshot.status !== status) {
            throw new Error(`not now (game is ${this.snapshot.status})`);
        }
        return this.snapshot;
    }

    handleLeafClick(index: number): void {
        const snapshot = this.snapshot;
        if (!snapshot || this.busy) return;
        if (snapshot.status === "awaiting_A" && this.seat === "A") {
            const key = `${snapshot.config.j}:${index}`;
            const onBoard = snapshot.board.intervals.some(
                (iv) => intervalKey(iv) === key,
            );
            if (onBoard) return;
            if (this.selection.has(index)) this.selection.delete(index);
            else this.selection.add(index);
            this.render();
            return;
        }
        if (snapshot.status === "awaiting_B") {
            const key = `${snapshot.config.j}:${index}`;
            const isPending = (snapshot.pending ?? []).some(
                (iv) => intervalKey(iv) === key,
            );
            if (!isPending) return;
            this.picks.set(key, this.paint);
            this.render();
        }
    }

    render(): void {
        const board = this.byId("board");
        const snapshot = this.snapshot;
        if (!snapshot) {
            board.textContent = "";
            this.byId("status-line").textContent = "no game yet";
            this.byId("banner").textContent = "";
            this.byId("violation").textContent = this.notice;
            this.byId("state-hash").textContent = "";
            this.byId("game-id").textContent = "";
            return;
        }

        const view: BoardView = viewFromSnapshot(snapshot);
        view.selected = this.selection;
        view.picks = this.picks;
        view.violation = this.violation;
        view.onLeafClick = (index) => this.handleLeafClick(index);
        renderBoard(board, view);

        this.byId("status-line").textContent = this.statusText(snapshot);
        this.byId("banner").textContent = this.bannerText(snapshot);
        this.byId("violation").textContent = this.violation
            ? describeViolation(this.violation)
            : this.notice;
        this.byId("state-hash").textContent = snapshot.state_hash;
        this.byId("game-id").textContent = snapshot.game_id;
        this.renderPalette(snapshot.config.d);
    }

    private statusText(snapshot: SnapshotJson): string {
        const eta = snapshot.config.eta;
        const head = `level ${snapshot.config.j}, ${snapshot.config.d} colours, ` +
            `ratio ${eta.num}/${eta.den}, stage ${snapshot.stage}`;
        switch (snapshot.status) {
            case "awaiting_A":
                return `${head}: player A presents a batch`;
            case "awaiting_B":
                return `${head}: player B colours ${snapshot.pending?.length ?? 0} interval(s)`;
            case "A_wins":
                return `${head}: no balanced colouring of the last batch exists`;
            case "B_wins":
                return `${head}: the row is full and balanced`;
        }
    }

    private bannerText(snapshot: SnapshotJson): string {
        if (snapshot.status === "A_wins") return "Player A wins";
        if (snapshot.status === "B_wins") return "Player B wins";
        return "";
    }

    private renderPalette(d: number): void {
        const host = this.byId("palette");
        host.textContent = "";
        for (let colour = 1; colour <= d; colour++) {
            const button = this.doc.createElement("button");
            button.type = "button";
            button.className = `swatch colour-${colour}` +
                (colour === this.paint ? " active" : "");
            button.dataset.colour = String(colour);
            button.textContent = String(colour);
            button.addEventListener("click", () => {
                this.paint = colour;
                this.render();
            });
            host.appendChild(button);
        }
    }
}
