"""Parametrized degree-sequence families used by experiments and the CLI.

Every constructor validates feasibility (parity, graphicality) and raises
InfeasibleFamily with the reason otherwise.  Degrees are emitted ascending.
"""

from __future__ import annotations

import math
from typing import Callable, Dict

from .degseq import DegreeSequence, erdos_gallai
from .errors import InfeasibleFamily


def _build(degrees, what: str) -> DegreeSequence:
    degrees = sorted(degrees)
    if not degrees:
        raise InfeasibleFamily(f"{what}: empty sequence")
    if sum(degrees) % 2:
        raise InfeasibleFamily(f"{what}: odd degree sum {sum(degrees)}")
    if not erdos_gallai(degrees):
        raise InfeasibleFamily(f"{what}: not graphical")
    return DegreeSequence(degrees)


def regular(d: int, n: int) -> DegreeSequence:
    """n vertices of degree d."""
    if d < 1 or n < 1:
        raise InfeasibleFamily("regular: d and n must be positive")
    if d >= n:
        raise InfeasibleFamily(f"regular: need d < n, got d={d} n={n}")
    return _build([d] * n, f"regular(d={d}, n={n})")


def with_leaves(n1: int, d: int, n: int) -> DegreeSequence:
    """n1 vertices of degree 1, the remaining n - n1 of degree d."""
    if n1 < 0 or n1 > n:
        raise InfeasibleFamily(f"with_leaves: bad n1={n1} for n={n}")
    return _build([1] * n1 + [d] * (n - n1),
                  f"with_leaves(n1={n1}, d={d}, n={n})")


def with_twos(n2: int, d: int, n: int) -> DegreeSequence:
    """n2 vertices of degree 2, the remaining n - n2 of degree d."""
    if n2 < 0 or n2 > n:
        raise InfeasibleFamily(f"with_twos: bad n2={n2} for n={n}")
    return _build([2] * n2 + [d] * (n - n2),
                  f"with_twos(n2={n2}, d={d}, n={n})")


def star(n: int) -> DegreeSequence:
    """One hub of degree n - 1, all others degree 1; always connected."""
    if n < 2:
        raise InfeasibleFamily(f"star: need n >= 2, got {n}")
    return _build([1] * (n - 1) + [n - 1], f"star(n={n})")


def two_stars(n: int) -> DegreeSequence:
    """Two hubs of degree n - 1 with all other vertices degree 2; every
    realization is connected through the hubs."""
    if n < 4:
        raise InfeasibleFamily(f"two_stars: need n >= 4, got {n}")
    return _build([2] * (n - 2) + [n - 1, n - 1], f"two_stars(n={n})")


def leaves_near_sqrt_m(m: int) -> DegreeSequence:
    """About sqrt(m) degree-1 vertices, the rest degree 3, targeting m edges."""
    n1 = int(math.isqrt(m))
    rest = (2 * m - n1) // 3
    n1 += (2 * m - n1) % 3  # absorb the remainder into extra leaves
    return with_leaves(n1, 3, n1 + rest)


def twos_tenth_of_m(m: int) -> DegreeSequence:
    """About m/10 degree-2 vertices, the rest degree 3, targeting m edges."""
    n2 = m // 10
    rest = 2 * m - 2 * n2
    if rest % 3:
        n2 += 1 if rest % 3 == 2 else 2  # keep the degree-3 mass a multiple of 3
        rest = 2 * m - 2 * n2
    return with_twos(n2, 3, n2 + rest // 3)


# size-parametrized families for the tightness experiment; the key is the
# CLI family name
TIGHTNESS_FAMILIES: Dict[str, Callable[[int], DegreeSequence]] = {
    "regular": lambda n: regular(3, n),
    "with-leaves": leaves_near_sqrt_m,
    "with-twos": twos_tenth_of_m,
    "two-stars": two_stars,
    "star": star,
}


def family_from_args(name: str, params: Dict[str, int]) -> DegreeSequence:
    """Build a family instance from CLI-style keyword parameters."""
    builders: Dict[str, Callable[..., DegreeSequence]] = {
        "regular": regular,
        "with-leaves": with_leaves,
        "with-twos": with_twos,
        "two-stars": two_stars,
        "star": star,
    }
    if name not in builders:
        raise InfeasibleFamily(f"unknown family {name!r}")
    try:
        return builders[name](**params)
    except TypeError as exc:
        raise InfeasibleFamily(f"bad parameters for {name}: {exc}") from None
