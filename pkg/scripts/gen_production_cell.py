"""Generate the flat production-cell fixtures.

Plates are put on a feed belt one after another, the gap between two
consecutive plates lying in [MINWAIT, MAXWAIT] (MINWAIT is the parameter).
A plate travels BELT time units to the end of the belt, where a robot arm
must pick it within HOLD time units or it falls off.  The arm carries the
plate to the press in ROT units and needs ROT more to come back.  A plate
reaching the end of the belt while another one still lies there is a
collision.  The goal is to bring every plate to the press.

The feeder is the environment, except that a plate that has not been
delivered by MAXWAIT is delivered by the belt itself (a controllable move
at the deadline): uncontrollable moves are never forced.

The components are composed here into one automaton whose guards and
invariants only relate a single clock to a constant or parameter.

    python scripts/gen_production_cell.py src/ptgsynth/fixtures
"""

from __future__ import annotations

import argparse
from collections import deque
from pathlib import Path

BELT, HOLD, ROT = 2, 1, 2
CONFIGS = {
    "production_cell_1plate.ptg": (1, 5),
    "production_cell_2plate_win.ptg": (2, 5),
    "production_cell_2plate_lose.ptg": (2, 2),
}


def plate_clock(i: int, n: int) -> str:
    # the last plate reuses the feeder clock, which is idle once it is delivered
    return "t" if i == n - 1 else f"b{i + 1}"


def name(state) -> str:
    fed, plates, robot = state
    return f"f{fed}_" + "_".join(plates) + f"_{robot}"


def generate(n: int, maxwait: int) -> str:
    clocks = ["t"] + [plate_clock(i, n) for i in range(n - 1)] + ["r"]
    start = (0, ("wait",) * n, "A")
    seen = {start: None}
    queue = deque([start])
    locations: dict[str, list[str]] = {}
    edges: list[str] = []

    def target(state) -> str:
        if all(p == "done" for p in state[1]):
            return "finished"
        if state not in seen:
            seen[state] = None
            queue.append(state)
        return name(state)

    while queue:
        s = queue.popleft()
        fed, plates, robot = s
        here = name(s)
        inv = []
        if fed < n:
            inv.append(f"t <= {maxwait}")
        for i, p in enumerate(plates):
            if p == "belt":
                inv.append(f"{plate_clock(i, n)} <= {BELT}")
        if robot in ("M", "K"):
            inv.append(f"r <= {ROT}")
        locations[here] = inv

        def edge(kind, dst, guard, resets, label):
            parts = []
            if guard:
                parts.append(f"guard: {guard};")
            if resets:
                parts.append("reset: {" + ", ".join(resets) + "};")
            parts.append(f"label: {label};")
            edges.append(f"{kind} {here} -> {dst} {{ " + " ".join(parts) + " }")

        if fed < n:
            nxt = list(plates)
            nxt[fed] = "belt"
            dst = target((fed + 1, tuple(nxt), robot))
            resets = sorted({"t", plate_clock(fed, n)})
            edge("uedge", dst, "t >= MINWAIT", resets, f"put{fed + 1}")
            edge("cedge", dst, f"t >= {maxwait}", resets, f"put{fed + 1}_late")
        for i, p in enumerate(plates):
            c = plate_clock(i, n)
            if p == "belt":
                nxt = list(plates)
                nxt[i] = "end"
                dst = "crash" if "end" in plates else target((fed, tuple(nxt), robot))
                edge("cedge", dst, f"{c} >= {BELT}", [c], f"arrive{i + 1}")
            elif p == "end":
                edge("uedge", "crash", f"{c} > {HOLD}", [], f"fall{i + 1}")
                if robot == "A":
                    nxt = list(plates)
                    nxt[i] = "held"
                    edge("cedge", target((fed, tuple(nxt), "M")), f"{c} <= {HOLD}", ["r"],
                         f"pick{i + 1}")
            elif p == "held":
                nxt = list(plates)
                nxt[i] = "done"
                edge("cedge", target((fed, tuple(nxt), "K")), f"r >= {ROT}", ["r"], f"drop{i + 1}")
        if robot == "K":
            edge("cedge", target((fed, plates, "A")), f"r >= {ROT}", ["r"], "back")

    lines = [
        f"# Production cell, {n} plate(s), MAXWAIT = {maxwait}; generated by "
        "scripts/gen_production_cell.py.",
        f"# Constants: belt {BELT}, hold {HOLD}, arm rotation {ROT}.",
        f"clocks: {', '.join(clocks)};",
        "parameters: MINWAIT;",
        "",
    ]
    for loc, inv in locations.items():
        body = f" invariant: {' && '.join(inv)}; " if inv else ""
        lines.append(f"location {loc} {{{body}}}")
    lines += ["location finished {}", "location crash {}", ""]
    lines += edges
    lines += ["", f"init: {name(start)};", "goal: finished;", ""]
    return "\n".join(lines)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("outdir", type=Path)
    args = ap.parse_args()
    for fname, (n, maxwait) in CONFIGS.items():
        (args.outdir / fname).write_text(generate(n, maxwait), encoding="utf-8")


if __name__ == "__main__":
    main()
