#!/usr/bin/env python3
"""Regenerates tests/fixtures/grid_*: a directed 6x5 road grid with a daily
TTI profile, spatially smoothed AR(1) noise and congestion bursts that spread
to neighbouring segments."""

import math
import random
import sys
from pathlib import Path

ROWS, COLS = 6, 5
PERIOD = 48
DAYS = 12


def main(out_dir: Path) -> None:
    rng = random.Random(20240601)
    n = ROWS * COLS
    label = [f"seg{r}{c}" for r in range(ROWS) for c in range(COLS)]
    edges = []
    nbrs = [[] for _ in range(n)]
    for r in range(ROWS):
        for c in range(COLS):
            v = r * COLS + c
            for dr, dc in ((0, 1), (1, 0)):
                rr, cc = r + dr, c + dc
                if rr < ROWS and cc < COLS:
                    u = rr * COLS + cc
                    edges.append((v, u))
                    edges.append((u, v))
                    nbrs[v].append(u)
                    nbrs[u].append(v)

    steps = PERIOD * DAYS
    amplitude = [0.25 + 0.35 * rng.random() for _ in range(n)]
    noise = [0.0] * n
    burst = [0.0] * n
    series = [[0.0] * steps for _ in range(n)]
    for t in range(steps):
        phase = (t % PERIOD) / PERIOD
        peak = math.exp(-((phase - 0.35) ** 2) / 0.004) + 0.7 * math.exp(-((phase - 0.75) ** 2) / 0.006)
        fresh = [rng.gauss(0.0, 0.05) for _ in range(n)]
        noise = [0.8 * noise[v] + 0.5 * fresh[v] + 0.5 * sum(fresh[u] for u in nbrs[v]) / len(nbrs[v])
                 for v in range(n)]
        if rng.random() < 0.08:
            burst[rng.randrange(n)] += 1.6
        burst = [0.6 * burst[v] + 0.36 * sum(burst[u] for u in nbrs[v]) / len(nbrs[v]) for v in range(n)]
        for v in range(n):
            series[v][t] = max(0.9, 1.1 + amplitude[v] * peak + noise[v] + burst[v])

    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "grid_graph.csv", "w") as f:
        f.write("src,dst,weight\n")
        for a, b in edges:
            f.write(f"{label[a]},{label[b]},1\n")
    with open(out_dir / "grid_series.csv", "w") as f:
        f.write("vertex," + ",".join(str(t) for t in range(steps)) + "\n")
        for v in range(n):
            f.write(label[v] + "," + ",".join(f"{x:.4f}" for x in series[v]) + "\n")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).resolve().parent.parent / "tests" / "fixtures")
