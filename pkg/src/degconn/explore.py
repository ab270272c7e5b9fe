"""The instrumented component-exploration process.

Starting from one vertex, iteration i selects the tree vertex v_i with the
fewest open half-edges (smallest label on ties) and exposes all of them.  For
each exposure the partner vertex w is classified: already explored -> L_i,
new of degree 1 -> J_i, new of degree 2 -> K_i (classification always by
d(w); a partner in the explored part takes the L class).  X_i tracks the
total open half-edge count; the component is fully explored when X hits 0.

Two deterministic replays share the machinery: `explore` walks a fixed simple
graph (neighbors in ascending label order), `explore_matching` walks a fixed
perfect matching on half-edges (slots in ascending order; loops consume both
half-edges of v_i in one exposure and add 2 to L_i).  `explore_revealing`
samples the object first and replays, which has exactly the law of revealing
partners one at a time.
"""

from __future__ import annotations

import csv
import heapq
import io
import math
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .degseq import DegreeSequence
from .graphs import Matching, MultiGraph, SimpleGraph, matching_to_multigraph
from .sampler import random_matching, rejection_sample, switch_chain_sample

# X* truncation parameters; kept as named constants so experiments can vary
# them through truncated_increment's keyword arguments.
BIG_STEP_FRACTION = 0.9


def small_degree_cutoff(m: int) -> float:
    """sqrt(m) / (ln m)^2; +inf at m <= 1 (the min-branch applies to all d)."""
    if m <= 1:
        return math.inf
    return math.sqrt(m) / (math.log(m) ** 2)


@dataclass(frozen=True)
class IterationRecord:
    i: int
    v: int
    d_i: int
    J: int
    K: int
    L: int
    X: int
    x_prev: int
    X_star: float
    new_vertices: Tuple[Tuple[int, int], ...]  # (vertex, degree) added this step


@dataclass(frozen=True)
class ExplorationTrace:
    start: int
    records: Tuple[IterationRecord, ...]
    component: frozenset
    died_at: int
    m: int

    def padded_records(self, length: Optional[int] = None) -> List[IterationRecord]:
        """Records padded with zero steps to `length` (default m): the walk
        formally takes m steps, with X frozen at 0 after death."""
        length = self.m if length is None else length
        out = list(self.records)
        i = len(out)
        while i < length:
            i += 1
            out.append(IterationRecord(i=i, v=0, d_i=0, J=0, K=0, L=0,
                                       X=0, x_prev=0, X_star=0,
                                       new_vertices=()))
        return out

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["i", "v_i", "d_i", "J", "K", "L", "X", "X_star"])
        for r in self.records:
            w.writerow([r.i, r.v, r.d_i, r.J, r.K, r.L, r.X, r.X_star])
        return buf.getvalue()

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "start": self.start,
            "m": self.m,
            "died_at": self.died_at,
            "component": sorted(self.component),
            "records": [
                {"i": r.i, "v_i": r.v, "d_i": r.d_i, "J": r.J, "K": r.K,
                 "L": r.L, "X": r.X, "X_star": r.X_star,
                 "new_vertices": [[v, d] for v, d in r.new_vertices]}
                for r in self.records
            ],
        }


def truncated_increment(record: IterationRecord, m: int,
                        big_step_fraction: float = BIG_STEP_FRACTION,
                        cutoff: Optional[float] = None):
    """X*_i: min(3 d_i, X_i - X_{i-1}) when d_i is below the small-degree
    cutoff sqrt(m)/(ln m)^2, else big_step_fraction * d_i.  Padded post-death
    records (d_i = 0) evaluate to 0."""
    thr = small_degree_cutoff(m) if cutoff is None else cutoff
    if record.d_i < thr:
        return min(3 * record.d_i, record.X - record.x_prev)
    return big_step_fraction * record.d_i


class _Walk:
    """Shared selection/bookkeeping for both replays."""

    def __init__(self, n: int, start: int, start_degree: int, m: int):
        self.open = [0] * (n + 1)
        self.in_tree = [False] * (n + 1)
        self.heap: List[Tuple[int, int]] = []
        self.X = start_degree
        self.open[start] = start_degree
        self.in_tree[start] = True
        heapq.heappush(self.heap, (start_degree, start))
        self.records: List[IterationRecord] = []
        self.m = m
        self.start = start

    def select(self) -> int:
        # lazy deletion: entries whose count went stale are dropped
        while True:
            d, v = self.heap[0]
            if self.in_tree[v] and self.open[v] == d and d > 0:
                heapq.heappop(self.heap)
                return v
            heapq.heappop(self.heap)

    def push(self, v: int) -> None:
        if self.open[v] > 0:
            heapq.heappush(self.heap, (self.open[v], v))

    def finish(self, i: int, v: int, d_i: int, x_prev: int, J: int, K: int,
               L: int, newv: List[Tuple[int, int]]) -> None:
        rec = IterationRecord(i=i, v=v, d_i=d_i, J=J, K=K, L=L,
                              X=self.X, x_prev=x_prev, X_star=0,
                              new_vertices=tuple(newv))
        self.records.append(replace(rec, X_star=truncated_increment(rec, self.m)))

    def trace(self) -> ExplorationTrace:
        component = frozenset(v for v in range(len(self.in_tree))
                              if self.in_tree[v])
        return ExplorationTrace(start=self.start, records=tuple(self.records),
                                component=component,
                                died_at=len(self.records), m=self.m)


def explore(g: SimpleGraph, start: int) -> ExplorationTrace:
    """Deterministic exploration replay on a fixed simple graph."""
    if not 1 <= start <= g.n:
        raise ValueError(f"start {start} out of range")
    walk = _Walk(g.n, start, g.degree(start), g.m)
    exposed = set()
    i = 0
    while walk.X > 0:
        v = walk.select()
        i += 1
        d_i = walk.open[v]
        x_prev = walk.X
        J = K = L = 0
        newv: List[Tuple[int, int]] = []
        for u in g.neighbors(v):
            key = (v, u) if v < u else (u, v)
            if key in exposed:
                continue
            exposed.add(key)
            if walk.in_tree[u]:
                L += 1
                walk.open[u] -= 1
                walk.open[v] -= 1
                walk.X -= 2
                walk.push(u)
            else:
                du = g.degree(u)
                walk.in_tree[u] = True
                if du == 1:
                    J += 1
                elif du == 2:
                    K += 1
                walk.open[u] = du - 1
                walk.open[v] -= 1
                walk.X += du - 2
                walk.push(u)
                newv.append((u, du))
        walk.finish(i, v, d_i, x_prev, J, K, L, newv)
    return walk.trace()


def explore_matching(seq: DegreeSequence, matching: Matching,
                     start: int) -> ExplorationTrace:
    """Deterministic exploration replay on a fixed full matching (multigraph
    configuration).  Half-edges of v_i are exposed in ascending slot order; a
    loop consumes two of them at once and counts 2 toward L_i."""
    if not matching.is_full:
        raise ValueError("explore_matching needs a full matching")
    if not 1 <= start <= seq.n:
        raise ValueError(f"start {start} out of range")
    offsets = seq.half_edge_offsets
    partner = matching.partner
    owner = np.repeat(np.arange(1, seq.n + 1), seq.degrees)
    consumed = [False] * (2 * seq.m)
    walk = _Walk(seq.n, start, seq.degree(start), seq.m)
    i = 0
    while walk.X > 0:
        v = walk.select()
        i += 1
        d_i = walk.open[v]
        x_prev = walk.X
        J = K = L = 0
        newv: List[Tuple[int, int]] = []
        for h in range(offsets[v - 1], offsets[v]):
            if consumed[h]:
                continue
            p = partner[h]
            consumed[h] = True
            consumed[p] = True
            w = int(owner[p])
            if w == v:
                # loop: both half-edges belong to v_i and land in L
                L += 2
                walk.open[v] -= 2
                walk.X -= 2
            elif walk.in_tree[w]:
                L += 1
                walk.open[w] -= 1
                walk.open[v] -= 1
                walk.X -= 2
                walk.push(w)
            else:
                dw = seq.degree(w)
                walk.in_tree[w] = True
                if dw == 1:
                    J += 1
                elif dw == 2:
                    K += 1
                walk.open[w] = dw - 1
                walk.open[v] -= 1
                walk.X += dw - 2
                walk.push(w)
                newv.append((w, dw))
        walk.finish(i, v, d_i, x_prev, J, K, L, newv)
    return walk.trace()


def explore_revealing(seq: DegreeSequence, rng: np.random.Generator,
                      start: int, mode: str = "multigraph",
                      sampler: str = "rejection",
                      max_attempts: int = 10**6,
                      steps: Optional[int] = None):
    """Sample-and-replay exploration.

    multigraph mode: draws a uniform perfect matching and replays it — each
    open half-edge's revealed partner is thereby uniform over the unmatched
    ones, the pure configuration model.  simple-conditioned mode: samples a
    uniform simple graph (rejection or switch chain) and replays explore.
    Returns (trace, realized graph).
    """
    if mode == "multigraph":
        matching = random_matching(seq, rng)
        trace = explore_matching(seq, matching, start)
        return trace, matching_to_multigraph(seq, matching)
    if mode == "simple-conditioned":
        if sampler == "rejection":
            g, _ = rejection_sample(seq, rng, max_attempts)
        elif sampler == "switch-chain":
            g = switch_chain_sample(seq, steps, rng)
        else:
            raise ValueError(f"unknown sampler {sampler!r}")
        return explore(g, start), g
    raise ValueError(f"unknown mode {mode!r}")


def explore_components(g: SimpleGraph) -> List[ExplorationTrace]:
    """Explore from every not-yet-reached vertex (ascending label); the trace
    components partition 1..n."""
    seen = [False] * (g.n + 1)
    traces = []
    for v in range(1, g.n + 1):
        if seen[v]:
            continue
        tr = explore(g, v)
        for u in tr.component:
            seen[u] = True
        traces.append(tr)
    return traces


def check_trace(trace: ExplorationTrace, simple: bool = True) -> List[str]:
    """Return human-readable descriptions of every violated trace invariant.

    The step inequality and both delta-X bounds hold for multigraph traces
    too; the sqrt-X and X >= L(L-1) bounds are stated for the simple-graph
    process (a loop already breaks them) and are only checked when
    simple=True.
    """
    bad: List[str] = []
    prev_x = None
    for r in trace.records:
        if prev_x is not None and r.x_prev != prev_x:
            bad.append(f"i={r.i}: x_prev {r.x_prev} does not chain from {prev_x}")
        prev_x = r.X
        dx = r.X - r.x_prev
        if r.J + r.K + r.L > r.d_i:
            bad.append(f"i={r.i}: J+K+L = {r.J + r.K + r.L} > d_i = {r.d_i}")
        if dx < r.d_i - 2 * r.J - r.K - 3 * r.L:
            bad.append(f"i={r.i}: step inequality fails "
                       f"({dx} < {r.d_i - 2 * r.J - r.K - 3 * r.L})")
        if dx < -2 * r.d_i:
            bad.append(f"i={r.i}: X dropped more than 2 d_i ({dx})")
        if r.X < 0:
            bad.append(f"i={r.i}: negative X")
        if simple:
            if r.L > math.isqrt(r.x_prev):
                bad.append(f"i={r.i}: L = {r.L} > floor sqrt X_prev = "
                           f"{math.isqrt(r.x_prev)}")
            if r.L >= 1 and r.x_prev < r.d_i * (r.L + 1):
                bad.append(f"i={r.i}: X_prev = {r.x_prev} < d_i (L+1) = "
                           f"{r.d_i * (r.L + 1)}")
            if r.X < r.L * (r.L - 1):
                bad.append(f"i={r.i}: X = {r.X} < L(L-1) = {r.L * (r.L - 1)}")
    if trace.records and trace.records[-1].X != 0:
        bad.append("trace did not end at X = 0")
    return bad
