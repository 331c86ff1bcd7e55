"""Brute-force ground truth on finite integer carriers.

Two independent searches decide the same question for a finite ``S``:

* ``coexistent_bruteforce`` looks for a decomposition of unit whose
  sub-multiset sums cover ``S`` (the atom data of a simple observable);
* ``witness_bruteforce`` searches every table ``beta`` over ``E`` for one
  satisfying (A1)-(A3).

``theoremmain_harness`` runs both over every small ``S`` and compares.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .effects import IntervalEffectAlgebra, decomposition_check
from .errors import SizeExceeded, TimeBudgetExceeded, UnsupportedCarrier
from .groups import Element
from .observables import certify_coexistent
from .witness import BetaTable, GroundSet, indices, popcount, submasks


@dataclass(frozen=True)
class OracleConfig:
    max_parts: int | None = None
    max_ground: int = 3
    time_budget: float | None = None
    prune: bool = True

    def __post_init__(self):
        if self.max_parts is not None and self.max_parts < 1:
            raise ValueError("max_parts must be positive")
        if self.max_ground < 0:
            raise ValueError("max_ground must be nonnegative")
        if self.time_budget is not None and self.time_budget <= 0:
            raise ValueError("time_budget must be positive")


class _Clock:
    def __init__(self, budget: float | None, deadline: float | None = None):
        if deadline is None and budget is not None:
            deadline = time.monotonic() + budget
        self.deadline = deadline

    def tick(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise TimeBudgetExceeded("oracle time budget exhausted")


def _require_finite(E: IntervalEffectAlgebra) -> None:
    if not E.is_finite:
        raise UnsupportedCarrier("brute-force oracles need a finite integer carrier")


def natural_part_bound(E: IntervalEffectAlgebra) -> int:
    """Longest possible decomposition: ``f(u) / min f(x)`` over nonzero effects."""
    f = E.group.functional
    weight = lambda x: sum(a * b for a, b in zip(f, x.value))
    nonzero = [x for x in E.elements() if any(x.value)]
    return weight(E.unit) // min(weight(x) for x in nonzero)


def enumerate_decompositions(E: IntervalEffectAlgebra, max_parts: int | None = None,
                             _clock: _Clock | None = None) -> Iterator[tuple]:
    """Every multiset of nonzero effects summing to ``u``, parts in non-decreasing order.

    If ``max_parts`` is below the natural length bound and some branch was
    cut, ``SizeExceeded`` is raised once the capped enumeration is exhausted.
    """
    _require_finite(E)
    g = E.group
    nonzero = [x for x in E.elements() if any(x.value)]
    natural = natural_part_bound(E)
    limit = natural if max_parts is None else min(max_parts, natural)
    cut = False

    def walk(start, remaining, parts):
        nonlocal cut
        if _clock is not None:
            _clock.tick()
        if not any(remaining.value):
            yield tuple(parts)
            return
        if len(parts) == limit:
            cut = True
            return
        for i in range(start, len(nonzero)):
            p = nonzero[i]
            if g.leq(p, remaining):
                parts.append(p)
                yield from walk(i, remaining - p, parts)
                parts.pop()

    yield from walk(0, Element(g, E.unit.value), [])
    if cut:
        raise SizeExceeded(f"decompositions longer than max_parts={max_parts} were skipped")


def submultiset_sums(E: IntervalEffectAlgebra, parts: Sequence[Element]) -> Iterator[tuple]:
    """Yield ``(sum, positions)`` for every sub-multiset, via multiplicity counters."""
    distinct: list[Element] = []
    where: list[list[int]] = []
    for i, p in enumerate(parts):
        for j, d in enumerate(distinct):
            if d == p:
                where[j].append(i)
                break
        else:
            distinct.append(p)
            where.append([i])
    g = E.group
    for counts in itertools.product(*(range(len(w) + 1) for w in where)):
        acc = g.zero()
        chosen = []
        for d, w, k in zip(distinct, where, counts):
            if k:
                acc = acc + k * d
                chosen.extend(w[:k])
        yield acc, sorted(chosen)


@dataclass
class CoexistenceVerdict:
    coexistent: bool
    decomposition: tuple | None = None
    subsums: list | None = None
    decompositions_tried: int = 0

    def to_json(self) -> dict:
        return {
            "coexistent": self.coexistent,
            "decomposition": None if self.decomposition is None
            else [p.to_json() for p in self.decomposition],
            "subsums": self.subsums,
            "decompositions_tried": self.decompositions_tried,
        }


def coexistent_bruteforce(E: IntervalEffectAlgebra, S: Sequence, cfg: OracleConfig = OracleConfig(),
                          _clock: _Clock | None = None) -> CoexistenceVerdict:
    """Find a decomposition of unit whose sub-multiset sums contain every member of ``S``.

    ``subsums[k]`` lists the part positions summing to ``S[k]``.
    """
    _require_finite(E)
    S = [E.effect(s) for s in S]
    if len(S) > cfg.max_ground:
        raise SizeExceeded(f"|S| = {len(S)} exceeds max_ground={cfg.max_ground}")
    clock = _clock or _Clock(cfg.time_budget)
    tried = 0
    for parts in enumerate_decompositions(E, cfg.max_parts, clock):
        tried += 1
        hit: list = [None] * len(S)
        for total, chosen in submultiset_sums(E, parts):
            for k, s in enumerate(S):
                if hit[k] is None and total == s:
                    hit[k] = chosen
            if all(h is not None for h in hit):
                return CoexistenceVerdict(True, parts, hit, tried)
    return CoexistenceVerdict(False, None, None, tried)


@dataclass
class WitnessVerdict:
    exists: bool
    beta: BetaTable | None
    search_space: int
    pruned: int
    leaves: int

    def to_json(self) -> dict:
        return {
            "witness_exists": self.exists,
            "witness": None if self.beta is None else [
                {"subset": indices(m), "value": v.to_json()} for m, v in enumerate(self.beta.values)],
            "search_space": self.search_space,
            "pruned": self.pruned,
            "leaves": self.leaves,
        }


def _d(g, values, x, a):
    acc = g.zero()
    for z in submasks(a & ~x):
        term = values[x | z]
        acc = acc + term if popcount(z) % 2 == 0 else acc - term
    return acc


def _down_ok(g, values, a) -> bool:
    # |A - X| increasing: most local differences first
    for x in sorted(submasks(a), key=lambda m: -popcount(m)):
        if not g.is_positive(_d(g, values, x, a)):
            return False
    return True


def witness_bruteforce(E: IntervalEffectAlgebra, S: Sequence, cfg: OracleConfig = OracleConfig(),
                       _clock: _Clock | None = None) -> WitnessVerdict:
    """Depth-first search over the free table entries (subsets of size >= 2).

    The empty set and singletons are forced by (A1) and (A2). Slots are
    filled by increasing size, so once ``beta(A)`` is set every ``D(X, A)``
    is determined and checked; with ``cfg.prune`` false the check only
    happens at complete tables.
    """
    _require_finite(E)
    if len(S) > cfg.max_ground:
        raise SizeExceeded(f"|S| = {len(S)} exceeds max_ground={cfg.max_ground}")
    ground = S if isinstance(S, GroundSet) else GroundSet(E, tuple(S))
    clock = _clock or _Clock(cfg.time_budget)
    g = E.group
    n = len(ground)
    size = 1 << n
    values: list = [None] * size
    values[0] = E.one()
    for i in range(n):
        values[1 << i] = ground[i]
    slots = sorted((m for m in range(size) if popcount(m) >= 2), key=lambda m: (popcount(m), m))
    elems = E.elements()
    space = len(elems) ** len(slots)
    pruned = 0
    leaves = 0

    for m in range(size):
        if popcount(m) <= 1 and not _down_ok(g, values, m):
            return WitnessVerdict(False, None, space, pruned, leaves)

    def search(k):
        nonlocal pruned, leaves
        clock.tick()
        if k == len(slots):
            leaves += 1
            if cfg.prune or all(_down_ok(g, values, a) for a in slots):
                return True
            return False
        a = slots[k]
        for v in elems:
            values[a] = v
            if cfg.prune and not _down_ok(g, values, a):
                pruned += 1
                continue
            if search(k + 1):
                return True
        values[a] = None
        return False

    if search(0):
        beta = BetaTable(ground, tuple(values))
        return WitnessVerdict(True, beta, space, pruned, leaves)
    return WitnessVerdict(False, None, space, pruned, leaves)


@dataclass
class HarnessEntry:
    S: list
    witness: WitnessVerdict
    coexistence: CoexistenceVerdict
    certified: bool | None
    sound: bool

    @property
    def agree(self) -> bool:
        return self.witness.exists == self.coexistence.coexistent

    def to_json(self) -> dict:
        doc = {
            "S": [s.to_json() for s in self.S],
            "witness_exists": self.witness.exists,
            "coexistent": self.coexistence.coexistent,
            "agree": self.agree,
            "search_space": self.witness.search_space,
            "pruned": self.witness.pruned,
            "certified": self.certified,
            "sound": self.sound,
        }
        if self.witness.beta is not None:
            doc["witness"] = self.witness.to_json()["witness"]
        if self.coexistence.decomposition is not None:
            doc["decomposition"] = [p.to_json() for p in self.coexistence.decomposition]
        return doc


@dataclass
class HarnessReport:
    algebra: str
    config: OracleConfig
    entries: list = field(default_factory=list)
    complete: bool = True
    elapsed: float = 0.0

    @property
    def agree(self) -> bool:
        return all(e.agree and e.sound and e.certified is not False for e in self.entries)

    def disagreements(self) -> list:
        return [e for e in self.entries if not e.agree]

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra,
            "max_ground": self.config.max_ground,
            "max_parts": self.config.max_parts,
            "prune": self.config.prune,
            "complete": self.complete,
            "all_agree": self.agree,
            "checked": len(self.entries),
            "coexistent_count": sum(e.coexistence.coexistent for e in self.entries),
            "elapsed_seconds": round(self.elapsed, 3),
            "results": [e.to_json() for e in self.entries],
        }


def theoremmain_harness(E: IntervalEffectAlgebra, cfg: OracleConfig = OracleConfig()) -> HarnessReport:
    """Compare both oracles on every ``S`` with ``|S| <= cfg.max_ground``.

    Positive verdicts are re-checked: decompositions with
    ``decomposition_check``, witnesses end to end with ``certify_coexistent``.
    On a resource cap the exception carries the partial report as ``.partial``.
    """
    _require_finite(E)
    start = time.monotonic()
    clock = _Clock(cfg.time_budget)
    report = HarnessReport(E.name or E.group.kind, cfg)
    elems = E.elements()
    try:
        for k in range(min(cfg.max_ground, len(elems)) + 1):
            for combo in itertools.combinations(elems, k):
                w = witness_bruteforce(E, combo, cfg, clock)
                c = coexistent_bruteforce(E, combo, cfg, clock)
                sound = True
                if c.coexistent:
                    sound = decomposition_check(E, c.decomposition)
                certified = None
                if w.exists:
                    sound = sound and w.beta.is_witness
                    certified = certify_coexistent(w.beta).passed
                report.entries.append(HarnessEntry(list(combo), w, c, certified, sound))
    except SizeExceeded as exc:
        report.complete = False
        report.elapsed = time.monotonic() - start
        exc.partial = report
        raise
    report.elapsed = time.monotonic() - start
    return report
