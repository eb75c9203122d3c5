"""Closed-form closure of a couple of CI statements via candidate dominants.

For antecedents u = (A,B|C) and v = (I,J|K) whose conditioning sets are
covered by the other statement's span (C inside I|J|K and K inside A|B|C),
nineteen set formulas over (A,B,C,I,J,K) produce every potential dominant
element of the couple's closure.  When the covering condition fails, the
closure is exactly the union of the two antecedents' dominated sets.

The formula table is kept twice over: hard-coded, and regenerated from the
four base formulas {1, 3, 11, 19} by the symmetry group generated by the
swaps A<->B, I<->J, and (A,B,C)<->(I,J,K).  ``orbit_selfcheck`` compares
the two sources; a mismatch means a transcription error in the table.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Iterable, Mapping

from .core import (
    Antichain,
    DependencyModel,
    Triplet,
    canon_tuple,
    dominates,
    maximal_elements,
    maximal_tuples,
    tuple_sort_key,
)

FormulaFn = Callable[[int, int, int, int, int, int], tuple[int, int, int]]


class PreconditionViolated(ValueError):
    """The couple does not satisfy the covering hypothesis of the formula table."""


class CoupleCase(Enum):
    DISJOINT = "disjoint"
    OVERLAPPING = "overlapping"


# Candidate dominant formulas, indexed 1..19.  Arguments are the six
# component masks (a, b, c, i, j, k) of the two antecedents; each returns
# the raw (first, second, cond) masks of one candidate.
FORMULAS: dict[int, FormulaFn] = {
    1: lambda a, b, c, i, j, k: (a, b, c),
    2: lambda a, b, c, i, j, k: (i, j, k),
    3: lambda a, b, c, i, j, k: (a & i, (j & ~c) | (b & (i | k)), c | (a & k)),
    4: lambda a, b, c, i, j, k: (a & j, (i & ~c) | (b & (j | k)), c | (a & k)),
    5: lambda a, b, c, i, j, k: (b & i, (j & ~c) | (a & (i | k)), c | (b & k)),
    6: lambda a, b, c, i, j, k: (b & j, (i & ~c) | (a & (j | k)), c | (b & k)),
    7: lambda a, b, c, i, j, k: (a & i, (b & ~k) | (j & (a | c)), k | (c & i)),
    8: lambda a, b, c, i, j, k: (b & i, (a & ~k) | (j & (b | c)), k | (c & i)),
    9: lambda a, b, c, i, j, k: (a & j, (b & ~k) | (i & (a | c)), k | (c & j)),
    10: lambda a, b, c, i, j, k: (b & j, (a & ~k) | (i & (b | c)), k | (c & j)),
    11: lambda a, b, c, i, j, k: (a & i, b | (a & j), c | (a & k)),
    12: lambda a, b, c, i, j, k: (a & j, b | (a & i), c | (a & k)),
    13: lambda a, b, c, i, j, k: (b & i, a | (b & j), c | (b & k)),
    14: lambda a, b, c, i, j, k: (b & j, a | (b & i), c | (b & k)),
    15: lambda a, b, c, i, j, k: (a & j, i | (b & j), k | (c & j)),
    16: lambda a, b, c, i, j, k: (b & j, i | (a & j), k | (c & j)),
    17: lambda a, b, c, i, j, k: (a & i, j | (b & i), k | (c & i)),
    18: lambda a, b, c, i, j, k: (b & i, j | (a & i), k | (c & i)),
    19: lambda a, b, c, i, j, k: ((a & i) | (b & j), (a & j) | (b & i), c | k),
}

FORMULA_COUNT = len(FORMULAS)
BASE_FORMULAS = (1, 3, 11, 19)

_FORMULA_ITEMS = sorted(FORMULAS.items())


def _couple_hypothesis(a: int, b: int, c: int, i: int, j: int, k: int) -> bool:
    return not (c & ~(i | j | k)) and not (k & ~(a | b | c))


def pair_dominant_tuples(
    u: tuple[int, int, int], v: tuple[int, int, int]
) -> list[tuple[int, int, int]]:
    """Dominant elements of the closure of a couple, as canonical mask triples."""
    a, b, c = u
    i, j, k = v
    cands = {u, v}
    if _couple_hypothesis(a, b, c, i, j, k):
        for _, fn in _FORMULA_ITEMS:
            x, y, z = fn(a, b, c, i, j, k)
            if x and y:
                cands.add(canon_tuple(x, y, z))
    return maximal_tuples(sorted(cands))


def couple_candidates(u: Triplet, v: Triplet) -> list[tuple[Triplet, tuple[int, ...]]]:
    """Evaluate all 19 candidate formulas on a couple satisfying the hypothesis.

    Candidates whose first or second component comes out empty are dropped.
    The rest are canonicalized and deduplicated; each surviving triplet is
    paired with the sorted indices of every formula that produced it.
    Sorted canonically.
    """
    if u.universe != v.universe:
        raise ValueError("triplets over different universes")
    a, b, c = u.as_tuple()
    i, j, k = v.as_tuple()
    if not _couple_hypothesis(a, b, c, i, j, k):
        raise PreconditionViolated(
            "couple does not satisfy the covering hypothesis "
            "(each conditioning set must lie within the other triplet's span)"
        )
    by_tuple: dict[tuple[int, int, int], list[int]] = {}
    for idx, fn in _FORMULA_ITEMS:
        x, y, z = fn(a, b, c, i, j, k)
        if not x or not y:
            continue
        by_tuple.setdefault(canon_tuple(x, y, z), []).append(idx)
    return [
        (Triplet(u.universe, *tup), tuple(by_tuple[tup]))
        for tup in sorted(by_tuple, key=tuple_sort_key)
    ]


@dataclass(frozen=True, eq=False)
class CoupleClosure:
    """Closure of a couple, represented by its dominant elements.

    ``provenance`` maps each dominant to the formula indices that produced
    it (indices 1 and 2 mark the original antecedents).
    """

    dominants: Antichain
    provenance: Mapping[Triplet, tuple[int, ...]]
    case: CoupleCase

    def expand(self) -> DependencyModel:
        return self.dominants.expand()


def closure_two_dominants(u: Triplet, v: Triplet) -> CoupleClosure:
    """Dominant elements of the semigraphoid closure of ``{u, v}``.

    When either conditioning set reaches outside the other triplet's span,
    the closure is the union of the two dominated sets and the dominants
    are just the maximal elements of ``{u, v}``.  Otherwise the dominants
    are the maximal elements among the 19 formula candidates.
    """
    if u.universe != v.universe:
        raise ValueError("triplets over different universes")
    universe = u.universe
    a, b, c = u.as_tuple()
    i, j, k = v.as_tuple()
    if not _couple_hypothesis(a, b, c, i, j, k):
        case = CoupleCase.DISJOINT
        prov: dict[Triplet, list[int]] = {}
        prov.setdefault(u, []).append(1)
        prov.setdefault(v, []).append(2)
        pool = list(prov)
    else:
        case = CoupleCase.OVERLAPPING
        prov = {}
        for t, idxs in couple_candidates(u, v):
            prov.setdefault(t, []).extend(idxs)
        # Formulas 1 and 2 reproduce the antecedents, so {u, v} is already in.
        pool = list(prov)
    kept = maximal_tuples(sorted((t.as_tuple() for t in pool), key=tuple_sort_key))
    kept_triplets = frozenset(Triplet(universe, *tup) for tup in kept)
    provenance = {t: tuple(sorted(prov[t])) for t in kept_triplets}
    return CoupleClosure(Antichain(universe, kept_triplets), provenance, case)


def membership_two(u: Triplet, v: Triplet, t: Triplet) -> bool:
    """Whether ``t`` lies in the closure of ``{u, v}``: dominated by a dominant."""
    cc = closure_two_dominants(u, v)
    return any(dominates(d, t) for d in cc.dominants)


# Orbit regeneration of the formula table.

def _swap_ab(fn: FormulaFn) -> FormulaFn:
    return lambda a, b, c, i, j, k: fn(b, a, c, i, j, k)


def _swap_ij(fn: FormulaFn) -> FormulaFn:
    return lambda a, b, c, i, j, k: fn(a, b, c, j, i, k)


def _swap_roles(fn: FormulaFn) -> FormulaFn:
    return lambda a, b, c, i, j, k: fn(i, j, k, a, b, c)


_GENERATORS = (_swap_ab, _swap_ij, _swap_roles)


def _sample_systems(count: int = 240, seed: str = "formula-orbits") -> list[tuple[int, ...]]:
    """Random six-set systems (two valid triplets satisfying the hypothesis).

    Components are masks over an 8-variable scratch space; only mask algebra
    is exercised, so no Universe is involved.
    """
    rng = random.Random(seed)
    n = 8
    systems: list[tuple[int, ...]] = []
    while len(systems) < count:
        a = b = c = i = j = k = 0
        for bit in range(n):
            slot = rng.randrange(4)
            if slot == 0:
                a |= 1 << bit
            elif slot == 1:
                b |= 1 << bit
            elif slot == 2:
                c |= 1 << bit
            slot = rng.randrange(4)
            if slot == 0:
                i |= 1 << bit
            elif slot == 1:
                j |= 1 << bit
            elif slot == 2:
                k |= 1 << bit
        if not (a and b and i and j):
            continue
        if _couple_hypothesis(a, b, c, i, j, k):
            systems.append((a, b, c, i, j, k))
    return systems


def _signature(fn: FormulaFn, systems: Iterable[tuple[int, ...]]) -> tuple:
    """Evaluation fingerprint of a formula, insensitive to the symmetric swap
    of its first two components."""
    sig = []
    for a, b, c, i, j, k in systems:
        x, y, z = fn(a, b, c, i, j, k)
        sig.append((min(x, y), max(x, y), z))
    return tuple(sig)


def orbit_map(systems: list[tuple[int, ...]] | None = None) -> dict[int, frozenset[int]]:
    """Orbit of each base formula under the symmetry group, as table indices.

    Raises ValueError if the table's formulas are not separated by the
    sample systems or a generated formula matches no table entry.
    """
    if systems is None:
        systems = _sample_systems()
    sig_to_idx: dict[tuple, int] = {}
    for idx, fn in _FORMULA_ITEMS:
        sig = _signature(fn, systems)
        if sig in sig_to_idx:
            raise ValueError(f"formulas {sig_to_idx[sig]} and {idx} are indistinguishable on the sample")
        sig_to_idx[sig] = idx
    orbits: dict[int, frozenset[int]] = {}
    for base in BASE_FORMULAS:
        frontier = [FORMULAS[base]]
        seen_sigs = {_signature(FORMULAS[base], systems)}
        covered = set()
        while frontier:
            fn = frontier.pop()
            sig = _signature(fn, systems)
            if sig not in sig_to_idx:
                raise ValueError(f"orbit of formula {base} left the 19-entry table")
            covered.add(sig_to_idx[sig])
            for gen in _GENERATORS:
                nxt = gen(fn)
                nsig = _signature(nxt, systems)
                if nsig not in seen_sigs:
                    seen_sigs.add(nsig)
                    frontier.append(nxt)
        orbits[base] = frozenset(covered)
    return orbits


def orbit_selfcheck() -> bool:
    """True iff the base-formula orbits regenerate the whole hard-coded table."""
    try:
        orbits = orbit_map()
    except ValueError:
        return False
    covered: set[int] = set()
    for members in orbits.values():
        covered |= members
    return covered == set(FORMULAS)
