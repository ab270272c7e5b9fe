"""Connected-component census and disconnection-probability estimation.

Components are classified exactly for up to 6 vertices.  For a connected
graph the pair (vertex count, edge count) plus the leaf count pins down every
named class: the single named tree shapes (edge, paths), the unicyclic shapes
(cycles, triangle with a pendant), and the dense 4-vertex shapes (K4 minus an
edge, K4).  Everything else small is bucketed by its degree multiset and
larger components by (vertex count, edge count).

Monte Carlo estimation draws uniform simple graphs in fixed-size batches,
runs one sparse connected-components pass over the block-diagonal union of a
batch, and reduces per-component tallies with integer arithmetic so that
results merge associatively and reproduce exactly at any thread count.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph
from scipy.stats import beta

from .degseq import (DegreeSequence, InvariantSet, compute_invariants,
                     theorem1_bound, validate_sequence)
from .errors import TooLarge, TrialsTooFew
from .exact import enumerate_realizations, iter_matching_extensions
from .graphs import Matching, SimpleGraph, half_edge_owner
from .sampler import (default_chain_steps, rejection_sample_batch,
                      switch_chain_batch)
from .streams import BATCH_SIZE, batch_ranges, substream

SMALL_COMPONENT_MAX = 6
ORACLE_MAX_HALF_EDGES = 20
SCHEMA_VERSION = 1

# Named classes paired with the invariant that bounds their appearance
# probability; the tightness table reports empirical mean / invariant.
CLASS_INVARIANT_PAIRS = (
    ("edge", "u_edge"),
    ("triangle", "u_triangle"),
    ("triangle_pendant", "u_triangle_pendant"),
    ("k4_minus_e", "u_k4_minus_e"),
    ("k4", "u_k4"),
)


class UnionFind:
    """Path-halving union-find over 1..n."""

    def __init__(self, n: int):
        self.parent = list(range(n + 1))
        self.size = [1] * (n + 1)
        self.components = n

    def find(self, v: int) -> int:
        p = self.parent
        while p[v] != v:
            p[v] = p[p[v]]
            v = p[v]
        return v

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.components -= 1
        return True


def connected_components(g: SimpleGraph) -> List[List[int]]:
    """Vertex sets of the components, each sorted, ordered by smallest member."""
    uf = UnionFind(g.n)
    for u, v in g.edges():
        uf.union(u, v)
    groups: Dict[int, List[int]] = {}
    for v in range(1, g.n + 1):
        groups.setdefault(uf.find(v), []).append(v)
    return sorted(groups.values())


def classify_component(degrees: Sequence[int], edge_count: int) -> str:
    """Class key for one connected component given its vertex degrees (within
    the component) and edge count."""
    nv = len(degrees)
    n1 = sum(1 for d in degrees if d == 1)
    if nv == 2 and edge_count == 1:
        return "edge"
    if edge_count == nv - 1 and n1 == 2:
        # a tree with exactly two leaves is a path
        return f"path_len_{edge_count}"
    if edge_count == nv and n1 == 0 and max(degrees) == 2:
        return "triangle" if nv == 3 else f"cycle_len_{nv}"
    if nv == 4 and edge_count == 4 and n1 == 1:
        return "triangle_pendant"
    if nv == 4 and edge_count == 5:
        return "k4_minus_e"
    if nv == 4 and edge_count == 6:
        return "k4"
    if nv <= SMALL_COMPONENT_MAX:
        return "other_small_" + "".join(str(d) for d in sorted(degrees))
    return f"large_{nv}v_{edge_count}e"


# (vertex count, edge count, leaf count) signatures of the named classes;
# unique among connected graphs of <= 6 vertices (validated against the full
# small-graph atlas in the test suite).
_NAMED_SIGNATURES = {
    (2, 1, 2): "edge",
    (3, 2, 2): "path_len_2",
    (4, 3, 2): "path_len_3",
    (5, 4, 2): "path_len_4",
    (6, 5, 2): "path_len_5",
    (3, 3, 0): "triangle",
    (4, 4, 0): "cycle_len_4",
    (5, 5, 0): "cycle_len_5",
    (6, 6, 0): "cycle_len_6",
    (4, 4, 1): "triangle_pendant",
    (4, 5, 0): "k4_minus_e",
    (4, 6, 0): "k4",
}


@dataclass
class ComponentTaxonomy:
    """Component counts per class, mergeable associatively."""

    counts: Counter = field(default_factory=Counter)

    def add(self, key: str, k: int = 1) -> None:
        self.counts[key] += k

    def merge(self, other: "ComponentTaxonomy") -> "ComponentTaxonomy":
        out = Counter(self.counts)
        out.update(other.counts)
        return ComponentTaxonomy(out)

    def total(self) -> int:
        return sum(self.counts.values())

    def to_json_dict(self) -> Dict[str, int]:
        return {k: self.counts[k] for k in sorted(self.counts)}


def classify_components(g: SimpleGraph) -> ComponentTaxonomy:
    tax = ComponentTaxonomy()
    for comp in connected_components(g):
        members = set(comp)
        degs = [g.degree(v) for v in comp]
        ne = sum(1 for u, v in g.edges() if u in members)
        tax.add(classify_component(degs, ne))
    return tax


def _classify_from_edges(n: int, degrees: Sequence[int],
                         edges: Iterable[Tuple[int, int]]) -> Tuple[int, ComponentTaxonomy]:
    """(component count, taxonomy) for an edge list realizing `degrees`."""
    uf = UnionFind(n)
    edge_list = list(edges)
    for u, v in edge_list:
        uf.union(u, v)
    ne: Dict[int, int] = Counter()
    for u, v in edge_list:
        ne[uf.find(u)] += 1
    members: Dict[int, List[int]] = {}
    for v in range(1, n + 1):
        members.setdefault(uf.find(v), []).append(v)
    tax = ComponentTaxonomy()
    for root, verts in members.items():
        tax.add(classify_component([degrees[v - 1] for v in verts],
                                   ne.get(root, 0)))
    return len(members), tax


@dataclass(frozen=True)
class ConnectivityOracle:
    probability_connected: Fraction
    realization_count: int
    taxonomy_totals: ComponentTaxonomy  # summed over all realizations

    def taxonomy_means(self) -> Dict[str, Fraction]:
        k = self.realization_count
        return {cls: Fraction(c, k)
                for cls, c in sorted(self.taxonomy_totals.counts.items())}


def exact_connectivity_oracle(seq: DegreeSequence,
                              max_half_edges: int = ORACLE_MAX_HALF_EDGES) -> ConnectivityOracle:
    """Exact P(connected) under the uniform simple-graph law by exhaustive
    realization enumeration, with the full component taxonomy tally."""
    if 2 * seq.m > max_half_edges:
        raise TooLarge(
            f"oracle refuses {2 * seq.m} half-edges (limit {max_half_edges})")
    validate_sequence(seq.degrees)
    total = 0
    connected = 0
    tax = ComponentTaxonomy()
    for edges in enumerate_realizations(seq.degrees):
        total += 1
        ncomp, t = _classify_from_edges(seq.n, seq.degrees, edges)
        if ncomp == 1:
            connected += 1
        tax = tax.merge(t)
    return ConnectivityOracle(Fraction(connected, total), total, tax)


def wilson_interval(successes: int, trials: int,
                    z: float = 1.959963984540054) -> Tuple[float, float]:
    if trials <= 0:
        raise ValueError("trials must be positive")
    p = successes / trials
    z2n = z * z / trials
    denom = 1.0 + z2n
    center = (p + z2n / 2.0) / denom
    half = z * math.sqrt(p * (1.0 - p) / trials + z2n / (4.0 * trials)) / denom
    # the bound is exactly 0 (resp. 1) at the extremes; avoid cancellation dust
    lo = 0.0 if successes == 0 else max(0.0, center - half)
    hi = 1.0 if successes == trials else min(1.0, center + half)
    return lo, hi


def clopper_pearson_interval(successes: int, trials: int,
                             alpha: float = 0.05) -> Tuple[float, float]:
    lo = 0.0 if successes == 0 else float(
        beta.ppf(alpha / 2, successes, trials - successes + 1))
    hi = 1.0 if successes == trials else float(
        beta.ppf(1 - alpha / 2, successes + 1, trials - successes))
    return lo, hi


def large_component_threshold(m: int) -> float:
    """Edge-count threshold 4 (ln m)^4 above which a component counts as
    large for the two-large-components statistic."""
    if m <= 1:
        return 0.0
    return 4.0 * math.log(m) ** 4


@dataclass
class _Tally:
    """Integer accumulators for one batch; merged in batch order."""

    trials: int = 0
    disconnected: int = 0
    components: int = 0
    attempts: int = 0
    two_large: int = 0
    taxonomy: ComponentTaxonomy = field(default_factory=ComponentTaxonomy)
    second_largest_edges: Counter = field(default_factory=Counter)

    def merge(self, other: "_Tally") -> "_Tally":
        out = _Tally(
            trials=self.trials + other.trials,
            disconnected=self.disconnected + other.disconnected,
            components=self.components + other.components,
            attempts=self.attempts + other.attempts,
            two_large=self.two_large + other.two_large,
            taxonomy=self.taxonomy.merge(other.taxonomy),
        )
        out.second_largest_edges = Counter(self.second_largest_edges)
        out.second_largest_edges.update(other.second_largest_edges)
        return out


def _batch_census(seq: DegreeSequence, lo: np.ndarray, hi: np.ndarray,
                  threshold: float) -> _Tally:
    """Census one batch of simple graphs given as (count, m) endpoint arrays
    (1-indexed, each row one graph)."""
    count, m = lo.shape
    n = seq.n
    block = np.arange(count, dtype=np.int64)[:, None] * n
    rows = (lo.astype(np.int64) - 1 + block).ravel()
    cols = (hi.astype(np.int64) - 1 + block).ravel()
    adj = sparse.coo_matrix(
        (np.ones(rows.size, dtype=np.int8), (rows, cols)),
        shape=(count * n, count * n))
    ncomp, labels = csgraph.connected_components(adj, directed=False)

    sizes = np.bincount(labels, minlength=ncomp)
    ne = np.bincount(labels[rows], minlength=ncomp)
    deg = np.asarray(seq.degrees, dtype=np.int64)
    leaves = np.bincount(labels, weights=np.tile(deg == 1, count),
                         minlength=ncomp).astype(np.int64)
    graph_of = np.empty(ncomp, dtype=np.int64)
    graph_of[labels] = np.arange(count * n, dtype=np.int64) // n

    tally = _Tally(trials=count)
    comps_per_graph = np.bincount(graph_of, minlength=count)
    tally.components = int(ncomp)
    tally.disconnected = int((comps_per_graph > 1).sum())

    large = ne > threshold
    large_per_graph = np.bincount(graph_of[large], minlength=count)
    tally.two_large = int((large_per_graph >= 2).sum())

    # second-largest component edge count per graph (0 when connected)
    order = np.lexsort((-ne, graph_of))
    starts = np.searchsorted(graph_of[order], np.arange(count))
    multi = comps_per_graph >= 2
    second = np.zeros(count, dtype=np.int64)
    second[multi] = ne[order[starts[multi] + 1]]
    for val, cnt in zip(*np.unique(second, return_counts=True)):
        tally.second_largest_edges[int(val)] += int(cnt)

    # classification: named signatures vectorized, exact fallback for the rest
    sig_class = np.full(ncomp, -1, dtype=np.int64)
    for cls_id, ((sv, se, sl), cls) in enumerate(_NAMED_SIGNATURES.items()):
        mask = (sizes == sv) & (ne == se) & (leaves == sl)
        if mask.any():
            sig_class[mask] = cls_id
    named_counts = np.bincount(sig_class[sig_class >= 0],
                               minlength=len(_NAMED_SIGNATURES))
    for cls_id, cls in enumerate(_NAMED_SIGNATURES.values()):
        if named_counts[cls_id]:
            tally.taxonomy.add(cls, int(named_counts[cls_id]))
    rest = np.nonzero(sig_class < 0)[0]
    if rest.size:
        big = rest[sizes[rest] > SMALL_COMPONENT_MAX]
        if big.size:
            keys, cnts = np.unique(
                np.stack([sizes[big], ne[big]], axis=1), axis=0,
                return_counts=True)
            for (sv, se), c in zip(keys, cnts):
                tally.taxonomy.add(f"large_{int(sv)}v_{int(se)}e", int(c))
        small = rest[sizes[rest] <= SMALL_COMPONENT_MAX]
        if small.size:
            degs_flat = np.tile(deg, count)
            for cid in small:
                verts = np.nonzero(labels == cid)[0]
                tally.taxonomy.add(
                    classify_component(degs_flat[verts].tolist(), int(ne[cid])))
    return tally


def _census_batch_job(args) -> Tuple[int, _Tally]:
    (degrees, seed, index, count, sampler, steps, max_attempts,
     threshold) = args
    seq = DegreeSequence(degrees)
    rng = substream(seed, index)
    if sampler == "rejection":
        lo, hi, attempts = rejection_sample_batch(seq, count, rng,
                                                  max_attempts)
    elif sampler == "switch-chain":
        codes = switch_chain_batch(seq, steps, count, rng)
        lo = (codes // (seq.n + 1)).astype(np.int64)
        hi = (codes % (seq.n + 1)).astype(np.int64)
        attempts = count
    else:
        raise ValueError(f"unknown sampler {sampler!r}")
    tally = _batch_census(seq, lo, hi, threshold)
    tally.attempts = int(attempts)
    return index, tally


@dataclass
class CensusReport:
    degrees: Tuple[int, ...]
    trials: int
    sampler: str
    steps: Optional[int]
    seed: int
    batch_size: int
    disconnected: int
    p_hat: float
    wilson_95: Tuple[float, float]
    clopper_pearson_95: Tuple[float, float]
    taxonomy: ComponentTaxonomy
    components_total: int
    attempts: int
    two_large: int
    large_threshold: float
    second_largest_edges: Dict[int, int]
    invariants: InvariantSet
    bound: Fraction
    ratio_to_bound: Optional[float]

    def taxonomy_means(self) -> Dict[str, float]:
        return {k: c / self.trials
                for k, c in sorted(self.taxonomy.counts.items())}

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "schema_version": SCHEMA_VERSION,
            "degrees": list(self.degrees),
            "trials": self.trials,
            "sampler": self.sampler,
            "steps": self.steps,
            "seed": self.seed,
            "batch_size": self.batch_size,
            "disconnected": self.disconnected,
            "p_hat": self.p_hat,
            "wilson_95": list(self.wilson_95),
            "clopper_pearson_95": list(self.clopper_pearson_95),
            "attempts": self.attempts,
            "components_total": self.components_total,
            "components_mean": self.components_total / self.trials,
            "taxonomy_counts": self.taxonomy.to_json_dict(),
            "taxonomy_means": self.taxonomy_means(),
            "two_large": self.two_large,
            "two_large_frequency": self.two_large / self.trials,
            "large_threshold_edges": self.large_threshold,
            "second_largest_edge_counts":
                {str(k): v for k, v in sorted(self.second_largest_edges.items())},
            "invariants": self.invariants.to_json_dict(),
            "bound": f"{self.bound.numerator}/{self.bound.denominator}",
            "bound_float": float(self.bound),
            "ratio_to_bound": self.ratio_to_bound,
        }

    def to_csv_text(self) -> str:
        lines = ["key,value"]
        d = self.to_json_dict()
        for key in ("schema_version", "trials", "sampler", "steps", "seed",
                    "batch_size", "disconnected", "p_hat", "attempts",
                    "components_mean", "two_large_frequency",
                    "large_threshold_edges", "bound_float", "ratio_to_bound"):
            lines.append(f"{key},{d[key]}")
        lines.append("class,count,mean")
        for cls, cnt in sorted(self.taxonomy.counts.items()):
            lines.append(f"{cls},{cnt},{cnt / self.trials}")
        return "\n".join(lines) + "\n"


def estimate_disconnection(seq: DegreeSequence, trials: int, seed: int,
                           sampler: str = "rejection",
                           steps: Optional[int] = None,
                           threads: int = 1,
                           batch_size: int = BATCH_SIZE,
                           max_attempts: int = 10**6) -> CensusReport:
    """Monte Carlo disconnection estimate with full component taxonomy.

    Workers own whole batches (seeded by batch index) and tallies merge in
    batch order, so the report is identical at any thread count.
    """
    validate_sequence(seq.degrees)
    if trials < 1:
        raise TrialsTooFew("trials must be >= 1")
    if sampler == "switch-chain" and steps is None:
        steps = default_chain_steps(seq.m)
    threshold = large_component_threshold(seq.m)
    jobs = [(tuple(seq.degrees), seed, b, stop - start, sampler, steps,
             max_attempts, threshold)
            for b, start, stop in batch_ranges(trials, batch_size)]
    if threads > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_census_batch_job, jobs, chunksize=1))
    else:
        results = [_census_batch_job(j) for j in jobs]
    results.sort(key=lambda r: r[0])
    total = _Tally()
    for _, tally in results:
        total = total.merge(tally)

    inv = compute_invariants(seq)
    bound = theorem1_bound(inv)
    p_hat = total.disconnected / trials
    ratio = p_hat / float(bound) if bound > 0 else None
    return CensusReport(
        degrees=tuple(seq.degrees), trials=trials, sampler=sampler,
        steps=steps if sampler == "switch-chain" else None, seed=seed,
        batch_size=batch_size, disconnected=total.disconnected, p_hat=p_hat,
        wilson_95=wilson_interval(total.disconnected, trials),
        clopper_pearson_95=clopper_pearson_interval(total.disconnected, trials),
        taxonomy=total.taxonomy, components_total=total.components,
        attempts=total.attempts, two_large=total.two_large,
        large_threshold=threshold,
        second_largest_edges=dict(sorted(total.second_largest_edges.items())),
        invariants=inv, bound=bound, ratio_to_bound=ratio)


def exact_multigraph_edge_component_mean(seq: DegreeSequence) -> Fraction:
    """Exact expected number of two-leaf components over uniform half-edge
    matchings (enumeration; small sequences only)."""
    if 2 * seq.m > ORACLE_MAX_HALF_EDGES:
        raise TooLarge("matching enumeration limit exceeded")
    leaf = [seq.degree(v) == 1 for v in range(1, seq.n + 1)]
    total = 0
    count = 0
    for matching in iter_matching_extensions(seq, Matching.empty(seq)):
        count += 1
        for a, b in matching.pairs():
            u = half_edge_owner(seq, a)
            w = half_edge_owner(seq, b)
            if u != w and leaf[u - 1] and leaf[w - 1]:
                total += 1
    return Fraction(total, count)


def multigraph_edge_component_stats(seq: DegreeSequence, trials: int,
                                    seed: int,
                                    batch_size: int = 4096) -> Dict[str, object]:
    """Mean (and standard error) of the two-leaf component count over
    unconditioned uniform matchings, sampled in seeded batches."""
    if trials < 1:
        raise TrialsTooFew("trials must be >= 1")
    deg = np.asarray(seq.degrees)
    owner = np.repeat(np.arange(1, seq.n + 1), seq.degrees)
    leaf_of_half_edge = (deg == 1)[owner - 1]
    s = 0
    s2 = 0
    hist: Counter = Counter()
    for b, start, stop in batch_ranges(trials, batch_size):
        rng = substream(seed, b)
        rows = stop - start
        perm = np.argsort(rng.random((rows, 2 * seq.m)), axis=1)
        a = leaf_of_half_edge[perm[:, 0::2]]
        c = leaf_of_half_edge[perm[:, 1::2]]
        counts = (a & c).sum(axis=1)
        s += int(counts.sum())
        s2 += int((counts.astype(np.int64) ** 2).sum())
        for val, cnt in zip(*np.unique(counts, return_counts=True)):
            hist[int(val)] += int(cnt)
    mean = s / trials
    var = max(s2 / trials - mean * mean, 0.0)
    sem = math.sqrt(var / trials)
    return {"trials": trials, "seed": seed, "mean": mean, "sem": sem,
            "histogram": {str(k): v for k, v in sorted(hist.items())}}


@dataclass(frozen=True)
class TightnessRow:
    size: int
    n: int
    m: int
    d_star_ok: bool
    cls: str
    empirical_mean: float
    u_value: float
    ratio: Optional[float]


@dataclass
class TightnessTable:
    family: str
    trials: int
    seed: int
    sampler: str
    rows: Tuple[TightnessRow, ...]

    def to_csv_text(self) -> str:
        lines = ["size,n,m,d_star_ok,class,empirical_mean,u_value,ratio"]
        for r in self.rows:
            ratio = "n/a" if r.ratio is None else repr(r.ratio)
            lines.append(f"{r.size},{r.n},{r.m},{int(r.d_star_ok)},{r.cls},"
                         f"{r.empirical_mean!r},{r.u_value!r},{ratio}")
        return "\n".join(lines) + "\n"

    def to_json_dict(self) -> Dict[str, object]:
        return {
            "schema_version": SCHEMA_VERSION,
            "family": self.family,
            "trials": self.trials,
            "seed": self.seed,
            "sampler": self.sampler,
            "rows": [
                {"size": r.size, "n": r.n, "m": r.m,
                 "d_star_ok": r.d_star_ok, "class": r.cls,
                 "empirical_mean": r.empirical_mean, "u_value": r.u_value,
                 "ratio": r.ratio}
                for r in self.rows
            ],
        }


def tightness_experiment(family: Callable[[int], DegreeSequence],
                         sizes: Sequence[int], trials: int, seed: int,
                         family_name: str = "custom",
                         sampler: str = "rejection", threads: int = 1,
                         batch_size: int = BATCH_SIZE) -> TightnessTable:
    """Empirical small-component means against their closed-form bounds
    across a growing family.  Sequences violating the neighbor-degree-sum
    condition d_star <= m/3 are flagged rather than rejected."""
    rows: List[TightnessRow] = []
    for idx, size in enumerate(sizes):
        seq = family(size)
        validate_sequence(seq.degrees)
        child = int(np.random.SeedSequence(
            (seed & (2**64 - 1), 777, idx)).generate_state(1, np.uint64)[0])
        report = estimate_disconnection(seq, trials, child, sampler=sampler,
                                        threads=threads,
                                        batch_size=batch_size)
        inv = report.invariants
        means = report.taxonomy_means()
        ok = inv.d_star <= Fraction(seq.m, 3)
        for cls, u_name in CLASS_INVARIANT_PAIRS:
            u = getattr(inv, u_name)
            mean = means.get(cls, 0.0)
            if u > 0:
                ratio: Optional[float] = mean / float(u)
            elif mean == 0.0:
                ratio = None  # 0/0: class impossible and bound vacuous
            else:
                ratio = math.inf
            rows.append(TightnessRow(size=size, n=seq.n, m=seq.m,
                                     d_star_ok=ok, cls=cls,
                                     empirical_mean=mean,
                                     u_value=float(u), ratio=ratio))
    return TightnessTable(family=family_name, trials=trials, seed=seed,
                          sampler=sampler, rows=tuple(rows))
