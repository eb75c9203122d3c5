"""Variable universes, bitmask set algebra, CI triplets, and the dominance order.

A conditional-independence statement over a finite universe of named
variables is a triplet of pairwise disjoint variable sets
``(first, second, cond)`` with the first two nonempty, read "first is
independent of second given cond".  The statement is symmetric in its
first two components, so triplets are kept in a canonical form (the two
components ordered by a fixed total order on sets) and the symmetric
variant never appears as a distinct value.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

VarSet = int
"""Subset of a universe's variable indices, as a bitmask (bit i = index i)."""

MAX_UNIVERSE = 16
MAX_ENUM_UNIVERSE = 10

_BAD_NAME_CHARS = set(",;|:#")


class EmptyComponent(ValueError):
    """First or second component of a triplet is empty."""


class NotDisjoint(ValueError):
    """Components of a triplet overlap."""


class UniverseTooLarge(RuntimeError):
    """Operation would enumerate all triplets of a universe above the cap."""


def submasks(mask: VarSet) -> Iterator[VarSet]:
    """All subsets of ``mask``, descending, ending with the empty set."""
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def nonempty_submasks(mask: VarSet) -> Iterator[VarSet]:
    """All nonempty subsets of ``mask``, descending."""
    sub = mask
    while sub:
        yield sub
        sub = (sub - 1) & mask


def set_key(s: VarSet) -> tuple[int, ...]:
    """The sorted tuple of member indices; sort key for the set order."""
    out = []
    while s:
        low = s & -s
        out.append(low.bit_length() - 1)
        s ^= low
    return tuple(out)


def set_less(a: VarSet, b: VarSet) -> bool:
    """Strict total order on sets: lexicographic on sorted index sequences.

    Stable under extending the universe by appending variables, which keeps
    canonical forms comparable across universes that share a prefix.
    """
    while a and b:
        la = a & -a
        lb = b & -b
        if la != lb:
            return la < lb
        a ^= la
        b ^= lb
    return b != 0


def canon_tuple(first: VarSet, second: VarSet, cond: VarSet) -> tuple[int, int, int]:
    """Canonical component order for a raw (first, second, cond) mask triple."""
    if set_less(second, first):
        return (second, first, cond)
    return (first, second, cond)


def tuple_sort_key(tup: tuple[int, int, int]) -> tuple[tuple[int, ...], ...]:
    return (set_key(tup[0]), set_key(tup[1]), set_key(tup[2]))


@dataclass(frozen=True)
class Universe:
    """Ordered collection of distinct variable names; index = position."""

    names: tuple[str, ...]

    def __post_init__(self) -> None:
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not 1 <= len(names) <= MAX_UNIVERSE:
            raise ValueError(f"universe must have 1..{MAX_UNIVERSE} variables, got {len(names)}")
        seen = set()
        for nm in names:
            if not nm or any(ch.isspace() or ch in _BAD_NAME_CHARS for ch in nm):
                raise ValueError(f"bad variable name {nm!r} (empty, whitespace, or delimiter character)")
            if nm in seen:
                raise ValueError(f"duplicate variable name {nm!r}")
            seen.add(nm)
        object.__setattr__(self, "_index", {nm: i for i, nm in enumerate(names)})

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def full(self) -> VarSet:
        return (1 << len(self.names)) - 1

    def index(self, name: str) -> int:
        try:
            return self._index[name]  # type: ignore[attr-defined]
        except KeyError:
            raise ValueError(f"unknown variable {name!r}") from None

    def varset(self, names: Iterable[str]) -> VarSet:
        mask = 0
        for nm in names:
            mask |= 1 << self.index(nm)
        return mask

    def names_of(self, s: VarSet) -> tuple[str, ...]:
        return tuple(self.names[i] for i in set_key(s))

    def format_set(self, s: VarSet) -> str:
        return ",".join(self.names_of(s))


@dataclass(frozen=True, slots=True)
class Triplet:
    """Canonical CI statement ``first ; second | cond`` over one universe.

    Construction canonicalizes (swaps the first two components if needed)
    and validates the triplet invariants.

    Raises
    ------
    EmptyComponent
        If ``first`` or ``second`` is empty.
    NotDisjoint
        If any two components intersect.
    """

    universe: Universe
    first: VarSet
    second: VarSet
    cond: VarSet

    def __post_init__(self) -> None:
        f, s, c = self.first, self.second, self.cond
        if f < 0 or s < 0 or c < 0 or (f | s | c) & ~self.universe.full:
            raise ValueError("component outside the universe")
        if not f or not s:
            raise EmptyComponent("first and second components must be nonempty")
        if f & s or f & c or s & c:
            raise NotDisjoint("components must be pairwise disjoint")
        if set_less(s, f):
            object.__setattr__(self, "first", s)
            object.__setattr__(self, "second", f)

    @classmethod
    def of(
        cls,
        universe: Universe,
        first: Iterable[str],
        second: Iterable[str],
        cond: Iterable[str] = (),
    ) -> "Triplet":
        """Build a triplet from variable names."""
        return cls(universe, universe.varset(first), universe.varset(second), universe.varset(cond))

    @property
    def span(self) -> VarSet:
        """Union of all three components."""
        return self.first | self.second | self.cond

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.first, self.second, self.cond)

    def sort_key(self) -> tuple[tuple[int, ...], ...]:
        return tuple_sort_key((self.first, self.second, self.cond))

    def __str__(self) -> str:
        u = self.universe
        text = f"{u.format_set(self.first)} ; {u.format_set(self.second)}"
        if self.cond:
            text += f" | {u.format_set(self.cond)}"
        return text


def make_triplet(universe: Universe, first: VarSet, second: VarSet, cond: VarSet) -> Triplet:
    """Canonical triplet from raw component masks (components swapped if needed)."""
    return Triplet(universe, first, second, cond)


@dataclass(frozen=True)
class DependencyModel:
    """Finite set of canonical triplets over one universe."""

    universe: Universe
    elements: frozenset[Triplet] = frozenset()

    def __post_init__(self) -> None:
        elements = frozenset(self.elements)
        object.__setattr__(self, "elements", elements)
        for t in elements:
            if t.universe != self.universe:
                raise ValueError("all triplets must share the model's universe")

    @classmethod
    def of(cls, universe: Universe, triplets: Iterable[Triplet] = ()) -> "DependencyModel":
        return cls(universe, frozenset(triplets))

    def __iter__(self) -> Iterator[Triplet]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, t: object) -> bool:
        return t in self.elements

    def sorted_elements(self) -> list[Triplet]:
        return sorted(self.elements, key=Triplet.sort_key)


@dataclass(frozen=True)
class Antichain:
    """Set of pairwise dominance-incomparable canonical triplets.

    Represents a dominance-downward-closed model by its maximal elements.
    """

    universe: Universe
    elements: frozenset[Triplet] = frozenset()

    def __post_init__(self) -> None:
        elements = frozenset(self.elements)
        object.__setattr__(self, "elements", elements)
        elems = list(elements)
        for t in elems:
            if t.universe != self.universe:
                raise ValueError("all triplets must share the antichain's universe")
        for t in elems:
            for u in elems:
                if u != t and dominates(u, t):
                    raise ValueError(f"not an antichain: {u} dominates {t}")

    def __iter__(self) -> Iterator[Triplet]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, t: object) -> bool:
        return t in self.elements

    def sorted_elements(self) -> list[Triplet]:
        return sorted(self.elements, key=Triplet.sort_key)

    def expand(self) -> DependencyModel:
        """Union of the dominated sets of all members."""
        out: set[tuple[int, int, int]] = set()
        for t in self.elements:
            _require_enumerable(t.universe)
            out |= dominated_tuples(t.as_tuple())
        return DependencyModel(
            self.universe, frozenset(Triplet(self.universe, *tup) for tup in out)
        )


def _dominates_raw(a: int, b: int, c: int, x: int, y: int, z: int) -> bool:
    """Dominance test on raw masks: (a,b,c) dominates (x,y,z)."""
    if (x | y | z) & ~(a | b | c):
        return False
    if c & ~z:
        return False
    return (not (x & ~a) and not (y & ~b)) or (not (x & ~b) and not (y & ~a))


def dominates(big: Triplet, small: Triplet) -> bool:
    """True iff ``small`` lies within ``big``: its span inside big's span,
    its conditioning set containing big's, and its two components embedded
    into big's two (in either orientation).  Reflexive."""
    if big.universe != small.universe:
        raise ValueError("triplets over different universes")
    return _dominates_raw(big.first, big.second, big.cond, small.first, small.second, small.cond)


def strictly_dominates(big: Triplet, small: Triplet) -> bool:
    return big != small and dominates(big, small)


def _require_enumerable(universe: Universe) -> None:
    if universe.n > MAX_ENUM_UNIVERSE:
        raise UniverseTooLarge(
            f"universe has {universe.n} variables; enumeration-backed operations cap at {MAX_ENUM_UNIVERSE}"
        )


_dominated_memo: dict[tuple[int, int, int], frozenset[tuple[int, int, int]]] = {}


def dominated_tuples(tup: tuple[int, int, int]) -> frozenset[tuple[int, int, int]]:
    """All canonical mask triples dominated by ``tup`` (universe independent)."""
    got = _dominated_memo.get(tup)
    if got is not None:
        return got
    a, b, c = tup
    out: set[tuple[int, int, int]] = set()
    for x in nonempty_submasks(a):
        for y in nonempty_submasks(b):
            free = (a | b) & ~(x | y)
            for w in submasks(free):
                out.add(canon_tuple(x, y, c | w))
    got = frozenset(out)
    _dominated_memo[tup] = got
    return got


def dominated_set(t: Triplet) -> DependencyModel:
    """All triplets of the universe dominated by ``t`` (including ``t``)."""
    _require_enumerable(t.universe)
    tups = dominated_tuples(t.as_tuple())
    return DependencyModel(t.universe, frozenset(Triplet(t.universe, *tup) for tup in tups))


def enumerate_triplets(u: Universe) -> Iterator[Triplet]:
    """Every canonical triplet over ``u``, each exactly once.

    The count for n variables is (4**n - 2*3**n + 2**n) / 2.
    """
    _require_enumerable(u)
    full = u.full
    for f in range(1, full + 1):
        for s in nonempty_submasks(full & ~f):
            if not set_less(f, s):
                continue
            for c in submasks(full & ~(f | s)):
                yield Triplet(u, f, s, c)


def triplet_count(n: int) -> int:
    """Closed-form size of the canonical triplet space for n variables."""
    return (4**n - 2 * 3**n + 2**n) // 2


def maximal_tuples(tups: Iterable[tuple[int, int, int]]) -> list[tuple[int, int, int]]:
    """Members of ``tups`` dominated by no other member; order preserved."""
    items = list(tups)
    return [
        t
        for t in items
        if not any(u != t and _dominates_raw(u[0], u[1], u[2], t[0], t[1], t[2]) for u in items)
    ]


def maximal_elements(m: DependencyModel) -> Antichain:
    """Triplets of ``m`` dominated by no other element of ``m``.

    If ``m`` is dominance-downward-closed, expanding the result reproduces it.
    """
    kept = maximal_tuples(t.as_tuple() for t in m.sorted_elements())
    return Antichain(m.universe, frozenset(Triplet(m.universe, *tup) for tup in kept))
