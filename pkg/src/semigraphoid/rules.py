"""Semigraphoid inference rules, closure computation, and derivation traces.

Symmetry is absorbed into the canonical triplet form, so the engine works
with three effective rules: decomposition and weak union (unary) and
contraction (binary).  Traces record which orientation of each canonical
premise was used, plus the subset a unary rule dropped or moved, which is
enough to re-execute every step exactly.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import Enum

from .core import (
    MAX_ENUM_UNIVERSE,
    Antichain,
    DependencyModel,
    Triplet,
    Universe,
    UniverseTooLarge,
    VarSet,
    _dominates_raw,
    canon_tuple,
    dominates,
    maximal_tuples,
)
from .couples import pair_dominant_tuples

DEFAULT_BUDGET = 1_000_000


class ResourceBudgetExceeded(RuntimeError):
    """Antichain closure exhausted its derived-triplet budget."""


class Rule(Enum):
    SYMMETRY = "symmetry"
    DECOMPOSITION = "decomposition"
    WEAK_UNION = "weak-union"
    CONTRACTION = "contraction"


@dataclass(frozen=True)
class Axiom:
    """Step justified by membership in the antecedent set (sorted order index)."""

    index: int


@dataclass(frozen=True)
class Applied:
    """Step produced by a rule application.

    ``premises`` are indices of earlier steps.  ``flips`` says, per premise,
    whether its first two components were swapped to match the rule schema.
    ``moved`` is the variable set a unary rule dropped (decomposition) or
    shifted into the conditioning set (weak union); zero for contraction.
    """

    rule: Rule
    premises: tuple[int, ...]
    flips: tuple[bool, ...]
    moved: VarSet = 0


@dataclass(frozen=True)
class TraceStep:
    triplet: Triplet
    justification: Axiom | Applied


@dataclass(frozen=True)
class DerivationTrace:
    steps: tuple[TraceStep, ...]

    @property
    def target(self) -> Triplet:
        return self.steps[-1].triplet

    def __len__(self) -> int:
        return len(self.steps)


def _unary_tuples(tup: tuple[int, int, int]):
    """One-step decomposition / weak-union consequences of a canonical triple.

    Yields (consequent, flipped, moved, is_weak_union).  Includes the triplet
    itself (moved = 0).
    """
    f, s, c = tup
    for flip, x, y in ((False, f, s), (True, s, f)):
        kept = y
        while kept:
            moved = y ^ kept
            yield canon_tuple(x, kept, c), flip, moved, False
            if moved:
                yield canon_tuple(x, kept, c | moved), flip, moved, True
            kept = (kept - 1) & y


def _contraction_tuples(t1: tuple[int, int, int], t2: tuple[int, int, int]):
    """Contraction consequences of the ordered premise pair (t1, t2).

    t1 plays (A, B | C u D) and t2 plays (A, C | D); all four orientation
    combinations are tried.  Yields (consequent, (flip1, flip2)).
    """
    f1, s1, c1 = t1
    f2, s2, c2 = t2
    for fl1, a1, b1 in ((False, f1, s1), (True, s1, f1)):
        for fl2, a2, b2 in ((False, f2, s2), (True, s2, f2)):
            if a1 == a2 and c1 == (b2 | c2):
                yield canon_tuple(a1, b1 | b2, c2), (fl1, fl2)


def rule_consequences(t: Triplet) -> DependencyModel:
    """All triplets reachable from ``t`` by one symmetry, decomposition, or
    weak-union application, in either orientation.  Contains ``t``."""
    out = {cons for cons, _, _, _ in _unary_tuples(t.as_tuple())}
    return DependencyModel(t.universe, frozenset(Triplet(t.universe, *tup) for tup in out))


def contraction(p1: Triplet, p2: Triplet) -> list[Triplet]:
    """Contraction consequents for the premise pair, every orientation; may be empty."""
    if p1.universe != p2.universe:
        raise ValueError("triplets over different universes")
    seen = []
    for cons, _ in _contraction_tuples(p1.as_tuple(), p2.as_tuple()):
        if cons not in seen:
            seen.append(cons)
    return [Triplet(p1.universe, *tup) for tup in seen]


def _saturate(
    seeds: list[tuple[int, int, int]],
    record: bool,
    target: tuple[int, int, int] | None = None,
):
    """Forward-chaining closure of the seed triples under the three rules.

    FIFO worklist seeded in the given order, so derivations are reproducible.
    Returns (seen, justifications); justifications is None unless recording.
    Stops early once ``target`` is derived.
    """
    just: dict | None = {} if record else None
    seen: set[tuple[int, int, int]] = set()
    queue: deque[tuple[int, int, int]] = deque()
    for i, tup in enumerate(seeds):
        if tup in seen:
            continue
        seen.add(tup)
        queue.append(tup)
        if record:
            just[tup] = ("axiom", i)
    if target is not None and target in seen:
        return seen, just
    processed: list[tuple[int, int, int]] = []
    while queue:
        t = queue.popleft()
        processed.append(t)
        for cons, flip, moved, weak in _unary_tuples(t):
            if cons in seen:
                continue
            seen.add(cons)
            queue.append(cons)
            if record:
                just[cons] = ("weak" if weak else "deco", t, flip, moved)
            if cons == target:
                return seen, just
        for other in processed:
            for p1, p2 in ((t, other), (other, t)):
                for cons, flips in _contraction_tuples(p1, p2):
                    if cons in seen:
                        continue
                    seen.add(cons)
                    queue.append(cons)
                    if record:
                        just[cons] = ("contr", (p1, p2), flips)
                    if cons == target:
                        return seen, just
    return seen, just


def _seed_tuples(m: DependencyModel) -> list[tuple[int, int, int]]:
    return [t.as_tuple() for t in m.sorted_elements()]


def _require_fixpoint_universe(universe: Universe) -> None:
    if universe.n > MAX_ENUM_UNIVERSE:
        raise UniverseTooLarge(
            f"fixpoint closure caps at {MAX_ENUM_UNIVERSE} variables, got {universe.n}"
        )


def closure_fixpoint(m: DependencyModel) -> DependencyModel:
    """Least superset of ``m`` closed under the four rules (reference engine)."""
    _require_fixpoint_universe(m.universe)
    seen, _ = _saturate(_seed_tuples(m), record=False)
    return DependencyModel(m.universe, frozenset(Triplet(m.universe, *tup) for tup in seen))


class TracedClosure:
    """Saturation of a model that keeps one justification per derived triplet,
    so membership queries can be answered with a replayable derivation."""

    def __init__(self, m: DependencyModel, target: Triplet | None = None):
        _require_fixpoint_universe(m.universe)
        self._model = m
        self._universe = m.universe
        self._seeds = _seed_tuples(m)
        self._seen, self._just = _saturate(
            self._seeds, record=True, target=target.as_tuple() if target else None
        )

    def __contains__(self, t: Triplet) -> bool:
        return t.as_tuple() in self._seen

    def closure(self) -> DependencyModel:
        return DependencyModel(
            self._universe, frozenset(Triplet(self._universe, *tup) for tup in self._seen)
        )

    def trace(self, t: Triplet) -> DerivationTrace:
        """Derivation of ``t`` from the model, ending in ``t``."""
        target = t.as_tuple()
        if target not in self._seen:
            raise KeyError(f"{t} is not in the closure")
        universe = self._universe
        just = self._just
        order: list[TraceStep] = []
        index: dict[tuple[int, int, int], int] = {}
        stack: list[tuple[tuple[int, int, int], bool]] = [(target, False)]
        while stack:
            tup, ready = stack.pop()
            if tup in index:
                continue
            j = just[tup]
            kind = j[0]
            if kind == "axiom":
                index[tup] = len(order)
                order.append(TraceStep(Triplet(universe, *tup), Axiom(j[1])))
                continue
            prems = j[1] if kind == "contr" else (j[1],)
            if not ready:
                stack.append((tup, True))
                for p in reversed(prems):
                    stack.append((p, False))
                continue
            idxs = tuple(index[p] for p in prems)
            if kind == "contr":
                applied = Applied(Rule.CONTRACTION, idxs, j[2])
            else:
                rule = Rule.WEAK_UNION if kind == "weak" else Rule.DECOMPOSITION
                applied = Applied(rule, idxs, (j[2],), j[3])
            index[tup] = len(order)
            order.append(TraceStep(Triplet(universe, *tup), applied))
        return DerivationTrace(tuple(order))


def derives(
    m: DependencyModel, t: Triplet, *, max_derived: int = DEFAULT_BUDGET
) -> tuple[bool, DerivationTrace | None]:
    """Decide whether ``t`` is in the semigraphoid closure of ``m``.

    Returns (True, trace) with a replayable derivation, or (False, None).
    Above the enumeration cap the verdict comes from the antichain engine;
    a positive verdict then has no trace and raises UniverseTooLarge.
    """
    if t.universe != m.universe:
        raise ValueError("triplet and model over different universes")
    if not m.elements:
        return False, None
    if m.universe.n <= MAX_ENUM_UNIVERSE:
        tc = TracedClosure(m, target=t)
        if t in tc:
            return True, tc.trace(t)
        return False, None
    ac = closure_antichain(m, max_derived=max_derived)
    if not any(dominates(d, t) for d in ac):
        return False, None
    raise UniverseTooLarge(
        f"trace construction needs a universe of at most {MAX_ENUM_UNIVERSE} variables"
    )


def _orient(t: Triplet, flip: bool) -> tuple[int, int, int]:
    return (t.second, t.first, t.cond) if flip else (t.first, t.second, t.cond)


def _reapply(universe: Universe, j: Applied, prems: list[Triplet]) -> Triplet | None:
    """Re-execute a recorded rule application; None if it does not fit."""
    if len(j.premises) != len(j.flips) or len(prems) != len(j.premises):
        return None
    if j.rule is Rule.CONTRACTION:
        if len(prems) != 2 or j.moved:
            return None
        a1, b1, c1 = _orient(prems[0], j.flips[0])
        a2, b2, c2 = _orient(prems[1], j.flips[1])
        if a1 != a2 or c1 != (b2 | c2):
            return None
        return Triplet(universe, *canon_tuple(a1, b1 | b2, c2))
    if len(prems) != 1:
        return None
    x, y, z = _orient(prems[0], j.flips[0])
    if j.rule is Rule.SYMMETRY:
        if j.moved:
            return None
        return prems[0]
    if j.moved & ~y:
        return None
    kept = y ^ j.moved
    if not kept:
        return None
    if j.rule is Rule.DECOMPOSITION:
        return Triplet(universe, *canon_tuple(x, kept, z))
    if j.rule is Rule.WEAK_UNION:
        return Triplet(universe, *canon_tuple(x, kept, z | j.moved))
    return None


def replay_trace(m: DependencyModel, trace: DerivationTrace) -> bool:
    """Independently check a derivation: every axiom step cites a member of
    ``m`` and every applied step is reproduced by re-executing its rule.
    Malformed traces return False rather than raising."""
    try:
        seeds = m.sorted_elements()
        steps = trace.steps
        if not steps:
            return False
        for k, step in enumerate(steps):
            j = step.justification
            if isinstance(j, Axiom):
                if not 0 <= j.index < len(seeds):
                    return False
                if seeds[j.index] != step.triplet:
                    return False
            elif isinstance(j, Applied):
                if any(not 0 <= p < k for p in j.premises):
                    return False
                prems = [steps[p].triplet for p in j.premises]
                if _reapply(m.universe, j, prems) != step.triplet:
                    return False
            else:
                return False
        return True
    except Exception:
        return False


@dataclass(frozen=True)
class RuleViolation:
    """A rule instance with premises in the model but consequent outside it."""

    rule: Rule
    premises: tuple[Triplet, ...]
    consequent: Triplet


def is_semigraphoid(m: DependencyModel) -> tuple[bool, RuleViolation | None]:
    """Whether ``m`` is closed under all four rules; on failure, one violation."""
    elems = m.sorted_elements()
    have = {t.as_tuple() for t in elems}
    universe = m.universe
    for t in elems:
        for cons, _, _, weak in _unary_tuples(t.as_tuple()):
            if cons not in have:
                rule = Rule.WEAK_UNION if weak else Rule.DECOMPOSITION
                return False, RuleViolation(rule, (t,), Triplet(universe, *cons))
    for p1 in elems:
        for p2 in elems:
            for cons, _ in _contraction_tuples(p1.as_tuple(), p2.as_tuple()):
                if cons not in have:
                    return False, RuleViolation(Rule.CONTRACTION, (p1, p2), Triplet(universe, *cons))
    return True, None


def closure_antichain(m: DependencyModel, *, max_derived: int = DEFAULT_BUDGET) -> Antichain:
    """Dominant elements of the closure of ``m``, without enumerating T(N).

    Saturates at the level of dominants: every pair of current antichain
    members contributes the dominants of its couple closure until nothing
    new appears.  Expanding the result reproduces ``closure_fixpoint(m)``.
    """
    universe = m.universe
    ac = maximal_tuples(_seed_tuples(m))
    acset = set(ac)
    pending: deque[tuple[tuple[int, int, int], tuple[int, int, int]]] = deque()
    for ii in range(len(ac)):
        for jj in range(ii + 1, len(ac)):
            pending.append((ac[ii], ac[jj]))
    derived = 0
    while pending:
        x, y = pending.popleft()
        if x not in acset or y not in acset:
            continue
        for d in pair_dominant_tuples(x, y):
            derived += 1
            if derived > max_derived:
                raise ResourceBudgetExceeded(
                    f"antichain closure exceeded the budget of {max_derived} derived triplets"
                )
            if any(_dominates_raw(*a, *d) for a in ac):
                continue
            ac = [a for a in ac if not _dominates_raw(*d, *a)]
            acset = set(ac)
            for z in ac:
                pending.append((d, z))
            ac.append(d)
            acset.add(d)
    return Antichain(universe, frozenset(Triplet(universe, *tup) for tup in ac))
