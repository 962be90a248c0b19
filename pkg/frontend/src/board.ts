// Tree-grid renderer.  One row per level 0..j, leaves at the bottom; every
// cell is a plain div positioned with CSS grid so a testing interval at any
// level lines up exactly over the leaves it contains.

import { IntervalJson, SnapshotJson, ViolationJson, intervalKey } from "./types.js";

export interface BoardView {
    j: number;
    d: number;
    coloured: Map<string, number>;
    pending: Set<string>;
    selected: Set<number>;
    picks: Map<string, number>;
    violation: ViolationJson | null;
    onLeafClick?: (index: number) => void;
}

export function viewFromSnapshot(snapshot: SnapshotJson): BoardView {
    const coloured = new Map<string, number>();
    for (const iv of snapshot.board.intervals) {
        if (iv.colour !== undefined) coloured.set(intervalKey(iv), iv.colour);
    }
    const pending = new Set<string>();
    for (const iv of snapshot.pending ?? []) pending.add(intervalKey(iv));
    return {
        j: snapshot.config.j,
        d: snapshot.config.d,
        coloured,
        pending,
        selected: new Set(),
        picks: new Map(),
        violation: null,
    };
}

function cellTitle(level: number, index: number): string {
    const width = 1 << level;
    return `[${index}/${width}, ${index + 1}/${width}]`;
}

export function renderBoard(host: HTMLElement, view: BoardView): void {
    const doc = host.ownerDocument;
    host.textContent = "";
    const grid = doc.createElement("div");
    grid.className = "board-grid";
    grid.style.display = "grid";
    grid.style.gridTemplateColumns = `repeat(${1 << view.j}, minmax(6px, 1fr))`;

    const violated = view.violation ? view.violation.testing_interval : null;

    for (let level = 0; level <= view.j; level++) {
        const span = 1 << (view.j - level);
        for (let index = 0; index < 1 << level; index++) {
            const cell = doc.createElement("div");
            cell.dataset.level = String(level);
            cell.dataset.index = String(index);
            cell.title = cellTitle(level, index);
            cell.style.gridRow = String(level + 1);
            cell.style.gridColumn = `${index * span + 1} / span ${span}`;

            if (level < view.j) {
                cell.className = "node";
            } else {
                const key = `${view.j}:${index}`;
                const classes = ["leaf"];
                const colour = view.coloured.get(key);
                if (colour !== undefined) {
                    classes.push("member", `colour-${colour}`);
                } else if (view.pending.has(key)) {
                    classes.push("pending");
                    const pick = view.picks.get(key);
                    if (pick !== undefined) classes.push("picked", `colour-${pick}`);
                } else {
                    classes.push("free");
                }
                if (view.selected.has(index)) classes.push("selected");
                cell.className = classes.join(" ");
                if (view.onLeafClick) {
                    const clickIndex = index;
                    cell.addEventListener("click", () => view.onLeafClick!(clickIndex));
                }
                const pickedColour = view.picks.get(key);
                if (pickedColour !== undefined && colour === undefined) {
                    cell.textContent = String(pickedColour);
                }
            }
            if (violated && violated.level === level && violated.index === index) {
                cell.className += " violated";
            }
            grid.appendChild(cell);
        }
    }
    host.appendChild(grid);
}

export function describeViolation(violation: ViolationJson): string {
    const where = cellTitle(violation.testing_interval.level, violation.testing_interval.index);
    if (violation.kind === "HOM1") {
        return `HOM1 at ${where}: colour ${violation.detail["colour"]} appears ` +
            `${violation.detail["count"]} times where every colour may appear at most once`;
    }
    if (violation.kind === "HOM2") {
        return `HOM2 at ${where}: commonest colour ${violation.detail["argmax_colour"]} has ` +
            `${violation.detail["max"]}, rarest colour ${violation.detail["argmin_colour"]} has ` +
            `${violation.detail["min"]}`;
    }
    return `not foreseeable at ${where}: the crowded child mixes old and new intervals ` +
        `while its sibling is light`;
}

export function describeInterval(iv: IntervalJson): string {
    return cellTitle(iv.level, iv.index);
}
