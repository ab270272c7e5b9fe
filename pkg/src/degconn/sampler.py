"""Uniform simple-graph samplers for a fixed degree sequence.

Two routes:
  * configuration-model rejection: draw uniform perfect matchings on half-edges
    until the multigraph is simple.  Each simple graph corresponds to exactly
    prod d(i)! matchings, so acceptance is exactly uniform.
  * edge-switching Markov chain: lazy chain whose moves replace edges xy, uv
    by xv, uy; the proposal kernel is symmetric and the state space connected,
    so the stationary law is uniform.

Batch variants (rejection_sample_batch, switch_chain_batch) drive the
Monte Carlo hot paths; they draw from a single generator in a documented
order and return plain edge arrays.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np

from .degseq import DegreeSequence
from .errors import AttemptsExhausted, InvalidSwitch, NotGraphical
from .exact import conditional_edge_probability
from .graphs import (HalfEdge, Matching, MultiGraph, SimpleGraph,
                     matching_to_multigraph)

DEFAULT_MAX_ATTEMPTS = 10**6


def owner_array(seq: DegreeSequence) -> np.ndarray:
    """owner_array[h] = 1-indexed owner of half-edge id h."""
    return np.repeat(np.arange(1, seq.n + 1, dtype=np.int32),
                     np.asarray(seq.degrees, dtype=np.int32))


def random_matching(seq: DegreeSequence, rng: np.random.Generator) -> Matching:
    """Uniform perfect matching on the 2m half-edges.

    Draw order: one permutation of 0..2m-1; consecutive entries pair up.
    """
    perm = rng.permutation(2 * seq.m)
    partner = [0] * (2 * seq.m)
    for k in range(0, 2 * seq.m, 2):
        a, b = int(perm[k]), int(perm[k + 1])
        partner[a], partner[b] = b, a
    return Matching(partner)


def rejection_sample(seq: DegreeSequence, rng: np.random.Generator,
                     max_attempts: int = DEFAULT_MAX_ATTEMPTS
                     ) -> Tuple[SimpleGraph, int]:
    """Sample a uniform simple graph by configuration-model rejection.

    Returns (graph, attempts used).  Raises AttemptsExhausted when the budget
    runs out (dense or non-graphical sequences); callers wanting a fallback
    should switch to switch_chain_sample explicitly.
    """
    owners = owner_array(seq)
    two_m = 2 * seq.m
    n = seq.n
    for attempt in range(1, max_attempts + 1):
        perm = rng.permutation(two_m)
        o = owners[perm]
        u = o[0::2]
        v = o[1::2]
        if (u == v).any():
            continue
        lo = np.minimum(u, v).astype(np.int64)
        hi = np.maximum(u, v).astype(np.int64)
        codes = np.sort(lo * (n + 1) + hi)
        if seq.m > 1 and (np.diff(codes) == 0).any():
            continue
        return SimpleGraph(n, list(zip(lo.tolist(), hi.tolist()))), attempt
    raise AttemptsExhausted(max_attempts)


def rejection_sample_batch(seq: DegreeSequence, count: int,
                           rng: np.random.Generator,
                           max_attempts: int = DEFAULT_MAX_ATTEMPTS
                           ) -> Tuple[np.ndarray, np.ndarray, int]:
    """Vectorized rejection sampling.

    Returns (lo, hi, attempts): two (count, m) int32 arrays with lo < hi
    row-wise (edge order within a row is code-sorted), plus the number of
    matchings inspected through the one yielding the count-th acceptance.
    Draw order: repeated blocks of uniform (rows, 2m) floats, one row per
    attempted matching (argsort of each row is the permutation); block sizes
    adapt to the observed acceptance rate.  Raises AttemptsExhausted once
    max_attempts matchings have been drawn without filling the request.
    """
    owners = owner_array(seq)
    two_m, m, n = 2 * seq.m, seq.m, seq.n
    out_lo = np.empty((count, m), dtype=np.int32)
    out_hi = np.empty((count, m), dtype=np.int32)
    got = 0
    attempts = 0
    drawn = 0
    while got < count:
        if drawn >= max_attempts:
            raise AttemptsExhausted(max_attempts)
        if drawn:
            acceptance = max(got / drawn, 1.0 / (4 * m + 4))
            rows = int((count - got) / acceptance * 1.25) + 16
        else:
            rows = count + count // 2 + 16
        rows = min(max(rows, 64), 65536, max_attempts - drawn)
        perm = np.argsort(rng.random((rows, two_m)), axis=1)
        drawn += rows
        o = owners[perm]
        u = o[:, 0::2]
        v = o[:, 1::2]
        lo = np.minimum(u, v)
        hi = np.maximum(u, v)
        codes = np.sort(lo.astype(np.int64) * (n + 1) + hi, axis=1)
        simple = ~(u == v).any(axis=1)
        if m > 1:
            simple &= ~(np.diff(codes, axis=1) == 0).any(axis=1)
        idx = np.nonzero(simple)[0]
        take = idx[: count - got]
        k = len(take)
        if k:
            # store edges in code-sorted order for canonical rows
            order = np.argsort(lo[take].astype(np.int64) * (n + 1) + hi[take],
                               axis=1)
            out_lo[got:got + k] = np.take_along_axis(lo[take], order, axis=1)
            out_hi[got:got + k] = np.take_along_axis(hi[take], order, axis=1)
            got += k
        if got < count:
            attempts = drawn
        else:
            attempts += int(take[-1]) + 1
    return out_lo, out_hi, attempts


def havel_hakimi_construct(seq: DegreeSequence) -> SimpleGraph:
    """Deterministic realization: repeatedly connect the vertex of largest
    residual degree to the next-largest ones.  Ties break toward smaller
    labels (sort key: residual descending, label ascending)."""
    if not seq.graphical:
        raise NotGraphical(f"{seq.degrees} is not graphical")
    res = [(d, v) for v, d in enumerate(seq.degrees, start=1)]
    edges: List[Tuple[int, int]] = []
    while True:
        res.sort(key=lambda t: (-t[0], t[1]))
        d, v = res[0]
        if d == 0:
            break
        if d > len(res) - 1:
            raise NotGraphical("residual degree exceeds remaining vertices")
        res[0] = (0, v)
        for i in range(1, d + 1):
            di, u = res[i]
            if di == 0:
                raise NotGraphical("ran out of positive residual degrees")
            res[i] = (di - 1, u)
            edges.append((min(v, u), max(v, u)))
    return SimpleGraph(seq.n, edges)


def switching(g: SimpleGraph, first: Tuple[int, int],
              second: Tuple[int, int]) -> SimpleGraph:
    """Apply the switch replacing xy, uv with xv, uy.

    first = (x, y) and second = (u, v) are oriented edges of g.  Validity:
    distinct edges, x != v, u != y, xv and uy not already edges (these
    conditions also rule out every shared-vertex degeneracy).
    """
    x, y = first
    u, v = second
    if not g.has_edge(x, y):
        raise InvalidSwitch(f"xy = ({x},{y}) is not an edge")
    if not g.has_edge(u, v):
        raise InvalidSwitch(f"uv = ({u},{v}) is not an edge")
    if {min(x, y), max(x, y)} == {min(u, v), max(u, v)}:
        raise InvalidSwitch("xy and uv are the same edge")
    if x == v:
        raise InvalidSwitch("x = v")
    if u == y:
        raise InvalidSwitch("u = y")
    if g.has_edge(x, v):
        raise InvalidSwitch(f"xv = ({x},{v}) already an edge")
    if g.has_edge(u, y):
        raise InvalidSwitch(f"uy = ({u},{y}) already an edge")
    edges = set(g.edges())
    edges.discard((min(x, y), max(x, y)))
    edges.discard((min(u, v), max(u, v)))
    edges.add((min(x, v), max(x, v)))
    edges.add((min(u, y), max(u, y)))
    return SimpleGraph(g.n, sorted(edges))


def default_chain_steps(m: int) -> int:
    """Heuristic step count 20 * m * ceil(ln m); no mixing theory claimed."""
    if m <= 1:
        return 0
    return 20 * m * math.ceil(math.log(m))


def switch_chain_sample(seq: DegreeSequence, steps: Optional[int],
                        rng: np.random.Generator,
                        initial: Optional[SimpleGraph] = None) -> SimpleGraph:
    """Run the lazy switch chain and return the final state.

    Proposal per step (draw order): edge index i uniform in [0,m), second
    index j uniform in [0,m-1) shifted past i, orientation o uniform in
    [0,4) (bit 0 flips the first edge, bit 1 the second); invalid proposals
    hold.  Starts from `initial` or the Havel-Hakimi seed.
    """
    g = initial if initial is not None else havel_hakimi_construct(seq)
    if initial is not None and g.degree_vector() != list(seq.degrees):
        raise ValueError("initial graph does not realize the sequence")
    m = seq.m
    if steps is None:
        steps = default_chain_steps(m)
    if m < 2 or steps == 0:
        return g
    edges = g.edges()
    adj = {e for e in edges}
    for _ in range(steps):
        i = int(rng.integers(m))
        j = int(rng.integers(m - 1))
        if j >= i:
            j += 1
        o = int(rng.integers(4))
        x, y = edges[i]
        if o & 1:
            x, y = y, x
        u, v = edges[j]
        if o & 2:
            u, v = v, u
        if x == v or u == y:
            continue
        xv = (min(x, v), max(x, v))
        uy = (min(u, y), max(u, y))
        if xv in adj or uy in adj:
            continue
        adj.discard((min(x, y), max(x, y)))
        adj.discard((min(u, v), max(u, v)))
        adj.add(xv)
        adj.add(uy)
        edges[i] = xv
        edges[j] = uy
    return SimpleGraph(seq.n, sorted(adj))


def switch_chain_batch(seq: DegreeSequence, steps: Optional[int], chains: int,
                       rng: np.random.Generator,
                       initial: Optional[SimpleGraph] = None) -> np.ndarray:
    """Run `chains` independent switch chains in lockstep (vectorized).

    Returns a (chains, m) int64 array of code-sorted edge codes
    lo * (n+1) + hi, one row per final state.  Draw order per step: i block,
    j block, orientation block (matching switch_chain_sample per chain).
    Intended for tiny n (adjacency kept as a dense (chains, n^2) bool array).
    """
    g = initial if initial is not None else havel_hakimi_construct(seq)
    n, m = seq.n, seq.m
    if steps is None:
        steps = default_chain_steps(m)
    base = np.array([(u, v) for u, v in g.edges()], dtype=np.int32)
    E = np.broadcast_to(base, (chains, m, 2)).copy()
    if m < 2 or steps == 0:
        codes = E[:, :, 0].astype(np.int64) * (n + 1) + E[:, :, 1]
        return np.sort(codes, axis=1)
    side = n + 1
    A = np.zeros((chains, side * side), dtype=bool)
    rows = np.arange(chains)
    for (u, v) in g.edges():
        A[:, u * side + v] = True
        A[:, v * side + u] = True
    for _ in range(steps):
        i = rng.integers(m, size=chains)
        j = rng.integers(m - 1, size=chains)
        j = j + (j >= i)
        o = rng.integers(4, size=chains)
        e1 = E[rows, i]
        e2 = E[rows, j]
        flip1 = (o & 1).astype(bool)
        flip2 = (o & 2).astype(bool)
        x = np.where(flip1, e1[:, 1], e1[:, 0])
        y = np.where(flip1, e1[:, 0], e1[:, 1])
        u = np.where(flip2, e2[:, 1], e2[:, 0])
        v = np.where(flip2, e2[:, 0], e2[:, 1])
        ok = (x != v) & (u != y)
        ok &= ~A[rows, x * side + v]
        ok &= ~A[rows, u * side + y]
        w = np.nonzero(ok)[0]
        if not len(w):
            continue
        xw, yw, uw, vw = x[w], y[w], u[w], v[w]
        A[w, xw * side + yw] = False
        A[w, yw * side + xw] = False
        A[w, uw * side + vw] = False
        A[w, vw * side + uw] = False
        A[w, xw * side + vw] = True
        A[w, vw * side + xw] = True
        A[w, uw * side + yw] = True
        A[w, yw * side + uw] = True
        E[w, i[w], 0] = np.minimum(xw, vw)
        E[w, i[w], 1] = np.maximum(xw, vw)
        E[w, j[w], 0] = np.minimum(uw, yw)
        E[w, j[w], 1] = np.maximum(uw, yw)
    codes = E[:, :, 0].astype(np.int64) * side + E[:, :, 1]
    return np.sort(codes, axis=1)


def conditional_edge_probability_oracle(seq: DegreeSequence, partial: Matching,
                                        hv: HalfEdge, hw: HalfEdge) -> Fraction:
    """Exact conditional probability that hv pairs with hw, over full simple
    matchings extending `partial`; exhaustive with a 2m <= 20 guard."""
    return conditional_edge_probability(seq, partial, hv, hw)


__all__ = [
    "DEFAULT_MAX_ATTEMPTS", "owner_array", "random_matching",
    "rejection_sample", "rejection_sample_batch", "havel_hakimi_construct",
    "switching", "default_chain_steps", "switch_chain_sample",
    "switch_chain_batch", "conditional_edge_probability_oracle",
    "Matching", "MultiGraph", "SimpleGraph", "matching_to_multigraph",
]
