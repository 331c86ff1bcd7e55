"""Candidate witness mappings and their inclusion-exclusion tables.

A ``BetaTable`` assigns an effect to every subset of a finite ground set
``S``. Subsets are bitmasks over the fixed element order of ``S``. For
``X <= A`` the table induces

    D(X, A) = sum_{X <= Z <= A} (-1)^(|X| + |Z|) beta(Z),

and ``beta`` is a witness mapping when ``beta(empty) = 1``,
``beta({c}) = c`` and every ``D(X, A)`` is positive.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .effects import EAMorphism, Effect, IntervalEffectAlgebra, effect_from_json
from .errors import DocumentError, InvalidSection, NotComparable, SizeExceeded, UnverifiedWitness
from .groups import Element, HermitianGroup, max_abs

DEFAULT_MAX_GROUND = 12


def max_ground_default() -> int:
    """Ground-set cap, overridable through ``COEX_MAX_GROUND``."""
    raw = os.environ.get("COEX_MAX_GROUND")
    return int(raw) if raw else DEFAULT_MAX_GROUND


# -- bitmask helpers -------------------------------------------------------

def popcount(mask: int) -> int:
    return bin(mask).count("1")


def indices(mask: int) -> list[int]:
    out, i = [], 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(idx: Iterable[int]) -> int:
    m = 0
    for i in idx:
        m |= 1 << i
    return m


def submasks(mask: int) -> Iterator[int]:
    """All submasks of ``mask`` in increasing numeric order."""
    s = 0
    while True:
        yield s
        if s == mask:
            return
        s = (s - mask) & mask


def interval(x: int, a: int) -> Iterator[int]:
    """All ``Z`` with ``x <= Z <= a``."""
    if x & ~a:
        raise NotComparable(f"{indices(x)} is not a subset of {indices(a)}")
    for s in submasks(a & ~x):
        yield x | s


def is_subset(x: int, a: int) -> bool:
    return x & ~a == 0


def pair_key(x: int, a: int):
    return (indices(x), indices(a))


def all_pairs(n: int) -> list[tuple[int, int]]:
    """Every ``(X, A)`` with ``X <= A <= S``, in lexicographic index-list order."""
    full = (1 << n) - 1
    pairs = [(x, a) for a in range(full + 1) for x in submasks(a)]
    pairs.sort(key=lambda p: pair_key(*p))
    return pairs


def mobius_mu(x: int, z: int) -> int:
    """Moebius function of the subset lattice: ``(-1)^(|X| + |Z|)``."""
    if not is_subset(x, z):
        raise NotComparable(f"{indices(x)} is not a subset of {indices(z)}")
    return -1 if (popcount(x) + popcount(z)) & 1 else 1


# -- ground sets and tables -----------------------------------------------

@dataclass(frozen=True)
class GroundSet:
    algebra: IntervalEffectAlgebra
    elements: tuple

    def __post_init__(self):
        elems = tuple(self.algebra.effect(e) for e in self.elements)
        for i in range(len(elems)):
            for j in range(i):
                if elems[i] == elems[j]:
                    raise ValueError(f"ground set elements {j} and {i} coincide")
        object.__setattr__(self, "elements", elems)

    def __len__(self):
        return len(self.elements)

    def __getitem__(self, i) -> Effect:
        return self.elements[i]

    def __iter__(self):
        return iter(self.elements)

    @property
    def full(self) -> int:
        return (1 << len(self.elements)) - 1

    def index_of(self, e: Element) -> int:
        for i, s in enumerate(self.elements):
            if s == e:
                return i
        raise KeyError(f"{e!r} is not in the ground set")

    def find(self, e: Element) -> int | None:
        try:
            return self.index_of(e)
        except KeyError:
            return None

    def members(self, mask: int) -> list[Effect]:
        return [self.elements[i] for i in indices(mask)]

    def to_json(self) -> list:
        return [e.to_json() for e in self.elements]


@dataclass(frozen=True)
class BetaTable:
    """A total map from subsets of ``ground`` (bitmasks) to effects."""

    ground: GroundSet
    values: tuple

    def __post_init__(self):
        n = len(self.ground)
        if len(self.values) != 1 << n:
            raise ValueError(f"table needs {1 << n} entries, got {len(self.values)}")
        E = self.ground.algebra
        object.__setattr__(self, "values", tuple(E.effect(v) for v in self.values))

    @property
    def algebra(self) -> IntervalEffectAlgebra:
        return self.ground.algebra

    def __call__(self, mask: int) -> Effect:
        return self.values[mask]

    @classmethod
    def from_function(cls, ground: GroundSet, fn: Callable[[int], object]) -> "BetaTable":
        return cls(ground, tuple(fn(m) for m in range(1 << len(ground))))

    @classmethod
    def from_mapping(cls, ground: GroundSet, mapping: Mapping[int, object]):
        """Build a table from a partial mapping; returns ``(table, implied)``.

        Missing empty-set and singleton entries are filled in as ``1`` and
        the singleton itself; their masks are returned as ``implied``. Any
        other missing entry is an error.
        """
        E = ground.algebra
        values, implied = [], []
        for m in range(1 << len(ground)):
            if m in mapping:
                values.append(mapping[m])
            elif m == 0:
                values.append(E.one())
                implied.append(m)
            elif popcount(m) == 1:
                values.append(ground[indices(m)[0]])
                implied.append(m)
            else:
                raise ValueError(f"no value given for subset {indices(m)}")
        return cls(ground, tuple(values)), implied

    @cached_property
    def report(self) -> "WitnessReport":
        return verify_witness(self)

    @property
    def is_witness(self) -> bool:
        return self.report.passed

    def to_json(self) -> dict:
        return {
            "algebra": self.algebra.to_json(),
            "ground": self.ground.to_json(),
            "beta": [{"subset": indices(m), "value": v.to_json()} for m, v in enumerate(self.values)],
        }


@dataclass(frozen=True)
class DTable:
    """``D(X, A)`` for every admissible pair, as raw group elements."""

    size: int
    entries: dict

    def __getitem__(self, key: tuple[int, int]) -> Element:
        return self.entries[key]

    def __len__(self):
        return len(self.entries)

    def pairs(self) -> list[tuple[int, int]]:
        return sorted(self.entries, key=lambda p: pair_key(*p))


def _need_subset(x: int, a: int) -> None:
    if not is_subset(x, a):
        raise NotComparable(f"{indices(x)} is not a subset of {indices(a)}")


def d_value(beta: BetaTable, x: int, a: int) -> Element:
    """Direct alternating sum over the interval ``[X, A]``."""
    _need_subset(x, a)
    g = beta.algebra.group
    acc = g.zero()
    for z in interval(x, a):
        term = beta(z)
        acc = acc + term if mobius_mu(x, z) == 1 else acc - term
    return acc


def d_value_rec(beta: BetaTable, x: int, a: int) -> Element:
    """Same quantity via D(X,A) = D(X, A-{c}) - D(X+{c}, A), peeling ``c`` from A-X."""
    _need_subset(x, a)
    free = a & ~x
    if not free:
        return Element(beta.algebra.group, beta(x).value)
    c = free & -free
    return d_value_rec(beta, x, a & ~c) - d_value_rec(beta, x | c, a)


def d_table(beta: BetaTable, max_ground: int | None = None) -> DTable:
    """All ``3^|S|`` values, filled by dynamic programming on the peeling recurrence."""
    n = len(beta.ground)
    cap = max_ground_default() if max_ground is None else max_ground
    if n > cap:
        raise SizeExceeded(f"|S| = {n} exceeds the ground-set cap {cap}")
    g = beta.algebra.group
    D: dict = {}
    for a in range(1 << n):
        # X|c > X numerically, so descending X sees D(X|c, A) first
        for x in sorted(submasks(a), reverse=True):
            free = a & ~x
            if not free:
                D[(x, a)] = Element(g, beta(x).value)
            else:
                c = free & -free
                D[(x, a)] = D[(x, a & ~c)] - D[(x | c, a)]
    return DTable(n, D)


# -- verification -----------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    axiom: str
    subset: int
    superset: int | None
    value: Element

    def sort_key(self):
        return (self.axiom, indices(self.subset), indices(self.superset or 0))

    def to_json(self) -> dict:
        doc = {"axiom": self.axiom, "X": indices(self.subset), "value": self.value.to_json()}
        if self.superset is not None:
            doc["A"] = indices(self.superset)
        return doc


@dataclass
class WitnessReport:
    passed: bool
    violations: list
    a1_ok: bool
    a2_ok: bool
    a3_checks: int
    upper_bound_ok: bool | None = None
    min_eigenvalue: float | None = None
    tolerance: float | None = None
    dtable: DTable | None = field(default=None, repr=False)

    def to_json(self) -> dict:
        doc = {
            "passed": self.passed,
            "a1": self.a1_ok,
            "a2": self.a2_ok,
            "a3_checks": self.a3_checks,
            "upper_bound_ok": self.upper_bound_ok,
            "violations": [v.to_json() for v in self.violations],
        }
        if self.tolerance is not None:
            doc["psd_tolerance"] = self.tolerance
            doc["min_eigenvalue"] = self.min_eigenvalue
        return doc


def verify_witness(beta: BetaTable, max_ground: int | None = None) -> WitnessReport:
    """Check (A1) beta(empty) = 1, (A2) beta({c}) = c, (A3) every D(X, A) >= 0.

    On success also confirms ``D(X, A) <= beta(X) <= 1`` for every pair.
    """
    E = beta.algebra
    g = E.group
    S = beta.ground
    violations = []
    a1 = beta(0) == E.unit
    if not a1:
        violations.append(Violation("A1", 0, None, beta(0)))
    a2 = True
    for i, s in enumerate(S):
        if beta(1 << i) != s:
            a2 = False
            violations.append(Violation("A2", 1 << i, None, beta(1 << i)))
    table = d_table(beta, max_ground)
    hermitian = isinstance(g, HermitianGroup)
    lowest = None
    a3 = []
    for (x, a), d in table.entries.items():
        if hermitian:
            ev = g.min_eigenvalue(d)
            lowest = ev if lowest is None else min(lowest, ev)
        if not g.is_positive(d):
            a3.append(Violation("A3", x, a, d))
    a3.sort(key=Violation.sort_key)
    violations.extend(a3)
    passed = not violations
    upper = None
    if passed:
        upper = all(g.leq(d, beta(x)) and g.leq(beta(x), E.unit) for (x, a), d in table.entries.items())
    return WitnessReport(
        passed=passed,
        violations=violations,
        a1_ok=a1,
        a2_ok=a2,
        a3_checks=len(table),
        upper_bound_ok=upper,
        min_eigenvalue=lowest,
        tolerance=g.psd_tolerance if hermitian else None,
        dtable=table,
    )


def beta_recovery_check(beta: BetaTable, x: int, a: int) -> bool:
    """Moebius inversion: ``beta(X) == sum_{X <= Z <= A} D(Z, A)``."""
    _need_subset(x, a)
    g = beta.algebra.group
    acc = g.zero()
    for z in interval(x, a):
        acc = acc + d_value(beta, z, a)
    return g.equals(acc, beta(x))


def partition_check(beta: BetaTable, x: int, a: int, c: int,
                    check_positive: bool | None = None) -> bool:
    """``sum_{Y <= C} D(X+Y, A+C) == D(X, A)``, with every summand positive.

    Positivity of the summands is required when ``check_positive`` is true;
    by default it is required exactly when ``beta`` is a witness mapping.
    """
    _need_subset(x, a)
    if c & a:
        raise ValueError(f"C = {indices(c)} meets A = {indices(a)}")
    g = beta.algebra.group
    if check_positive is None:
        check_positive = beta.is_witness
    parts = [d_value(beta, x | y, a | c) for y in submasks(c)]
    acc = g.zero()
    for p in parts:
        acc = acc + p
    if not g.equals(acc, d_value(beta, x, a)):
        return False
    return not check_positive or all(g.is_positive(p) for p in parts)


def partition_residual(beta: BetaTable, x: int, a: int, c: int) -> float:
    g = beta.algebra.group
    acc = g.zero()
    for y in submasks(c):
        acc = acc + d_value(beta, x | y, a | c)
    return max_abs(acc - d_value(beta, x, a))


@dataclass
class StructuralReport:
    results: dict
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"results": self.results, "failures": self.failures}


def structural_properties(beta: BetaTable) -> StructuralReport:
    """Antitone, lower-bound, zero-absorption and unit-extension properties.

    Properties that need ``0`` or ``u`` in the ground set report ``"n/a"``
    when that element is absent.
    """
    report = beta.report
    if not report.passed:
        raise UnverifiedWitness("structural properties need a verified witness mapping")
    E = beta.algebra
    S = beta.ground
    full = S.full
    failures = []

    antitone = True
    for y in range(full + 1):
        for x in submasks(y):
            if not E.leq(beta(y), beta(x)):
                antitone = False
                failures.append({"property": "antitone", "X": indices(x), "Y": indices(y)})

    lower = True
    for x in range(full + 1):
        for i in indices(x):
            if not E.leq(beta(x), S[i]):
                lower = False
                failures.append({"property": "lower_bound", "X": indices(x), "element": i})

    results = {"antitone": _verdict(antitone), "lower_bound": _verdict(lower)}

    z = S.find(E.zero())
    if z is None:
        results["zero_absorption"] = "n/a"
    else:
        ok = True
        for x in range(full + 1):
            if x >> z & 1 and beta(x) != E.zero():
                ok = False
                failures.append({"property": "zero_absorption", "X": indices(x)})
        results["zero_absorption"] = _verdict(ok)

    t = S.find(E.unit)
    if t is None:
        results["unit_extension"] = "n/a"
        results["unit_extension_zero_d"] = "n/a"
    else:
        bit = 1 << t
        ext = zero_d = True
        for x in range(full + 1):
            if x & bit:
                continue
            if beta(x) != beta(x | bit):
                ext = False
                failures.append({"property": "unit_extension", "X": indices(x)})
            if d_value(beta, x, x | bit) != E.zero():
                zero_d = False
                failures.append({"property": "unit_extension_zero_d", "X": indices(x)})
        results["unit_extension"] = _verdict(ext)
        results["unit_extension_zero_d"] = _verdict(zero_d)
    return StructuralReport(results, failures)


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


# -- transport -------------------------------------------------------------

def pushforward(beta1: BetaTable, phi: EAMorphism, section=None) -> BetaTable:
    """Transport ``beta1`` along ``phi``: ``beta2(X) = phi(beta1(p(X)))``.

    The new ground set is ``phi(S1)`` with duplicates removed, in order of
    first occurrence. ``section`` maps each image to a chosen preimage in
    ``S1`` (a mapping or a sequence of pairs); by default the first
    preimage is used.
    """
    S1 = beta1.ground
    images: list[Effect] = []
    first: list[int] = []
    for i, s in enumerate(S1):
        img = phi(s)
        if not any(img == t for t in images):
            images.append(img)
            first.append(i)
    S2 = GroundSet(phi.target, tuple(images))
    if section is None:
        pre = first
    else:
        pairs = section.items() if isinstance(section, Mapping) else section
        chosen = {}
        for img, src in pairs:
            j = S2.find(img)
            if j is None:
                raise InvalidSection(f"{img!r} is not an image of the ground set")
            i = S1.find(src)
            if i is None:
                raise InvalidSection(f"{src!r} is not in the source ground set")
            if phi(S1[i]) != S2[j]:
                raise InvalidSection(f"{src!r} does not map to {img!r}")
            chosen[j] = i
        if len(chosen) != len(S2):
            raise InvalidSection("section must choose a preimage for every image")
        pre = [chosen[j] for j in range(len(S2))]

    def value(m):
        src = mask_of(pre[j] for j in indices(m))
        return phi(beta1(src))

    return BetaTable.from_function(S2, value)


def restrict(beta: BetaTable, sub: int) -> BetaTable:
    """Restrict to the ground subset given by mask ``sub`` (order preserved)."""
    S = beta.ground
    if sub & ~S.full:
        raise ValueError("restriction mask exceeds the ground set")
    keep = indices(sub)
    S0 = GroundSet(S.algebra, tuple(S[i] for i in keep))
    return BetaTable.from_function(S0, lambda m: beta(mask_of(keep[j] for j in indices(m))))


# -- documents -------------------------------------------------------------

def ground_from_json(E: IntervalEffectAlgebra, raw: Sequence) -> GroundSet:
    if not isinstance(raw, list):
        raise DocumentError("'ground' must be a list of effects")
    try:
        return GroundSet(E, tuple(effect_from_json(E, r) for r in raw))
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc


def beta_from_json(E: IntervalEffectAlgebra, ground: GroundSet, entries: Sequence):
    """Parse the ``beta`` list of a document; returns ``(table, implied masks)``."""
    if not isinstance(entries, list):
        raise DocumentError("'beta' must be a list of {subset, value} entries")
    n = len(ground)
    mapping = {}
    for item in entries:
        try:
            idx = item["subset"]
            if any(not isinstance(i, int) or not 0 <= i < n for i in idx) or len(set(idx)) != len(idx):
                raise DocumentError(f"bad subset {idx!r}")
            m = mask_of(idx)
            if m in mapping:
                raise DocumentError(f"duplicate subset {sorted(idx)}")
            mapping[m] = effect_from_json(E, item["value"])
        except (KeyError, TypeError) as exc:
            raise DocumentError(f"bad beta entry {item!r}") from exc
    try:
        return BetaTable.from_mapping(ground, mapping)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc
