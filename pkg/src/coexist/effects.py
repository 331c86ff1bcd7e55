"""Interval effect algebras ``[0, u]`` over an ordered group carrier."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    DocumentError,
    GroupMismatch,
    NotLattice,
    OutOfInterval,
    Undefined,
    UnsupportedCarrier,
)
from .groups import (
    Element,
    HermitianGroup,
    IntVectorGroup,
    UnitalGroup,
    element_from_json,
    group_from_json,
    total,
)


class Effect(Element):
    """A group element validated to lie in ``[0, u]`` of its algebra."""

    __slots__ = ("algebra",)

    def __init__(self, algebra: "IntervalEffectAlgebra", element: Element):
        super().__init__(element.group, element.value)
        object.__setattr__(self, "algebra", algebra)

    def __repr__(self):
        return "Effect" + super().__repr__()[len("Element"):]

    __hash__ = Element.__hash__


class IntervalEffectAlgebra:
    """The effect algebra ``[0, u]_G`` with ``a (+) b`` defined iff ``a + b <= u``."""

    def __init__(self, ambient: UnitalGroup, name: str | None = None):
        self.ambient = ambient
        self.name = name
        self._elements: list[Effect] | None = None

    def __repr__(self):
        label = self.name or self.group.kind
        return f"IntervalEffectAlgebra({label})"

    @property
    def group(self):
        return self.ambient.group

    @property
    def unit(self) -> Element:
        return self.ambient.unit

    @property
    def is_finite(self) -> bool:
        return isinstance(self.group, IntVectorGroup)

    def zero(self) -> Effect:
        return Effect(self, self.group.zero())

    def one(self) -> Effect:
        return Effect(self, self.unit)

    def contains(self, x: Element) -> bool:
        g = self.group
        return g.is_positive(x) and g.leq(x, self.unit)

    def effect(self, x) -> Effect:
        """Validate ``x`` (an Element or raw value) as a member of ``[0, u]``."""
        if isinstance(x, Effect) and x.algebra is self:
            return x
        if not isinstance(x, Element):
            x = self.group.element(x)
        if x.group is not self.group and x.group != self.group:
            raise GroupMismatch("element belongs to a different group")
        if not self.contains(x):
            raise OutOfInterval(f"{x!r} is not in [0, u]")
        return Effect(self, x)

    def _own(self, *xs: Element) -> None:
        for x in xs:
            if isinstance(x, Effect) and x.algebra is not self and x.algebra.ambient != self.ambient:
                raise GroupMismatch("effect belongs to a different algebra")

    def is_perp(self, a: Element, b: Element) -> bool:
        self._own(a, b)
        return self.group.leq(a + b, self.unit)

    def oplus(self, a: Element, b: Element) -> Effect:
        if not self.is_perp(a, b):
            raise Undefined(f"{a!r} (+) {b!r} is undefined")
        return Effect(self, a + b)

    def ominus(self, b: Element, a: Element) -> Effect:
        """``b (-) a``, defined iff ``a <= b``."""
        self._own(a, b)
        if not self.group.leq(a, b):
            raise Undefined(f"{b!r} (-) {a!r} is undefined")
        return Effect(self, b - a)

    def orthosupplement(self, a: Element) -> Effect:
        self._own(a)
        return Effect(self, self.unit - a)

    def leq(self, a: Element, b: Element) -> bool:
        self._own(a, b)
        return self.group.leq(a, b)

    def elements(self) -> list[Effect]:
        if self._elements is None:
            self._elements = enumerate_effects(self)
        return self._elements

    def meet(self, a: Element, b: Element) -> Effect:
        return lattice_meet(self, a, b)

    def join(self, a: Element, b: Element) -> Effect:
        return lattice_join(self, a, b)

    def meet_all(self, xs: Iterable[Element]) -> Effect:
        """Meet of a finite family; the empty meet is ``u``."""
        acc = self.one()
        for x in xs:
            acc = lattice_meet(self, acc, x)
        return acc

    def join_all(self, xs: Iterable[Element]) -> Effect:
        """Join of a finite family; the empty join is ``0``."""
        acc = self.zero()
        for x in xs:
            acc = lattice_join(self, acc, x)
        return acc

    def to_json(self) -> dict:
        doc = self.ambient.to_json()
        if self.name:
            doc["name"] = self.name
        return doc


def make_effect(E: IntervalEffectAlgebra, x) -> Effect:
    return E.effect(x)


def _cone_points_below(group: IntVectorGroup, budget: int) -> set:
    """All cone members with functional value at most ``budget``."""
    cone = group.cone
    gens = cone.generators
    weights = [cone.weight(g) for g in gens]
    found = set()

    def walk(i, point, left):
        if i == len(gens):
            found.add(point)
            return
        g, w = gens[i], weights[i]
        k = 0
        while k * w <= left:
            walk(i + 1, tuple(p + k * c for p, c in zip(point, g)), left - k * w)
            k += 1

    walk(0, (0,) * group.dimension, budget)
    return found


def enumerate_effects(E: IntervalEffectAlgebra) -> list[Effect]:
    """Every ``x`` with ``0 <= x <= u``, sorted lexicographically."""
    g = E.group
    if not isinstance(g, IntVectorGroup):
        raise UnsupportedCarrier("Hermitian effect algebras cannot be enumerated")
    u = E.unit.value
    if g.cone is None:
        points = itertools.product(*(range(c + 1) for c in u))
        return [Effect(E, Element(g, p)) for p in points]
    candidates = _cone_points_below(g, g.cone.weight(u))
    out = []
    for p in sorted(candidates):
        x = Element(g, p)
        if g.leq(x, E.unit):
            out.append(Effect(E, x))
    return out


def _bound(E, a, b, lower: bool) -> Effect:
    g = E.group
    if isinstance(g, HermitianGroup):
        raise UnsupportedCarrier("lattice operations need a finite integer carrier")
    E._own(a, b)
    if g.cone is None:
        pick = min if lower else max
        return Effect(E, Element(g, tuple(pick(p, q) for p, q in zip(a.value, b.value))))
    if lower:
        bounds = [c for c in E.elements() if g.leq(c, a) and g.leq(c, b)]
        best = [m for m in bounds if all(g.leq(c, m) for c in bounds)]
    else:
        bounds = [c for c in E.elements() if g.leq(a, c) and g.leq(b, c)]
        best = [m for m in bounds if all(g.leq(m, c) for c in bounds)]
    if len(best) != 1:
        raise NotLattice(f"no unique {'meet' if lower else 'join'} for {a!r}, {b!r}")
    return best[0]


def lattice_meet(E: IntervalEffectAlgebra, a: Element, b: Element) -> Effect:
    return _bound(E, a, b, lower=True)


def lattice_join(E: IntervalEffectAlgebra, a: Element, b: Element) -> Effect:
    return _bound(E, a, b, lower=False)


@dataclass
class MVReport:
    passed: bool
    reason: str = ""
    counterexample: tuple | None = None
    pairs_checked: int = 0

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "reason": self.reason,
            "counterexample": None if self.counterexample is None
            else [x.to_json() for x in self.counterexample],
            "pairs_checked": self.pairs_checked,
        }


def is_mv_check(E: IntervalEffectAlgebra) -> MVReport:
    """Check lattice-orderedness and ``(a v b) (-) a == b (-) (a ^ b)`` on all pairs."""
    n = 0
    for a in E.elements():
        for b in E.elements():
            n += 1
            try:
                m, j = lattice_meet(E, a, b), lattice_join(E, a, b)
            except NotLattice as exc:
                return MVReport(False, f"not a lattice: {exc}", (a, b), n)
            if E.ominus(j, a) != E.ominus(b, m):
                return MVReport(False, "(a v b) (-) a != b (-) (a ^ b)", (a, b), n)
    return MVReport(True, "", None, n)


@dataclass(frozen=True)
class EAMorphism:
    """A finite table ``source element -> target effect``."""

    source: IntervalEffectAlgebra
    target: IntervalEffectAlgebra
    table: Mapping

    def __call__(self, a: Element) -> Effect:
        try:
            return self.target.effect(self.table[a])
        except KeyError:
            raise UnsupportedCarrier(f"{a!r} is outside the morphism table") from None

    @classmethod
    def from_function(cls, source, target, fn) -> "EAMorphism":
        return cls(source, target, {a: target.effect(fn(a)) for a in source.elements()})


@dataclass
class MorphismReport:
    passed: bool
    em1: bool
    em2_violations: list = field(default_factory=list)
    consequences: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "em1": self.em1,
            "em2_violations": [[a.to_json(), b.to_json(), why] for a, b, why in self.em2_violations],
            "consequences": self.consequences,
        }


def morphism_check(phi: EAMorphism) -> MorphismReport:
    """Check (EM1) and (EM2) on every orthogonal pair of the finite source.

    When both hold, isotonicity and preservation of 0, ', and (-) are checked
    as consequences and recorded.
    """
    S, T = phi.source, phi.target
    elems = S.elements()
    missing = [a for a in elems if a not in phi.table]
    if missing:
        return MorphismReport(False, False, [(a, a, "not in table") for a in missing])
    em1 = phi(S.one()) == T.one()
    bad = []
    for a in elems:
        for b in elems:
            if not S.is_perp(a, b):
                continue
            fa, fb = phi(a), phi(b)
            if not T.is_perp(fa, fb):
                bad.append((a, b, "images not orthogonal"))
            elif phi(S.oplus(a, b)) != fa + fb:
                bad.append((a, b, "sum not preserved"))
    passed = em1 and not bad
    consequences = {}
    if passed:
        consequences["preserves_zero"] = phi(S.zero()) == T.zero()
        consequences["preserves_orthosupplement"] = all(
            phi(S.orthosupplement(a)) == T.orthosupplement(phi(a)) for a in elems)
        iso = True
        minus = True
        for a in elems:
            for b in elems:
                if S.leq(a, b):
                    iso = iso and T.leq(phi(a), phi(b))
                    minus = minus and phi(S.ominus(b, a)) == T.ominus(phi(b), phi(a))
        consequences["isotone"] = iso
        consequences["preserves_ominus"] = minus
    return MorphismReport(passed, em1, bad, consequences)


def decomposition_check(E: IntervalEffectAlgebra, parts: Sequence[Element]) -> bool:
    """True iff the parts are orthogonal and sum to ``u``."""
    if not parts:
        return False
    g = E.group
    acc = g.zero()
    for p in parts:
        if not E.contains(p):
            return False
        acc = acc + p
        if not g.leq(acc, E.unit):
            return False
    return g.equals(acc, E.unit)


@dataclass(frozen=True)
class DecompositionOfUnit:
    algebra: IntervalEffectAlgebra
    parts: tuple

    def __post_init__(self):
        if any(self.algebra.group.equals(p, self.algebra.group.zero()) for p in self.parts):
            raise ValueError("decomposition parts must be nonzero")
        if not decomposition_check(self.algebra, self.parts):
            raise ValueError("parts do not form a decomposition of unit")

    def to_json(self) -> list:
        return [p.to_json() for p in self.parts]


@dataclass(frozen=True)
class FiniteBooleanAlgebra:
    """Subsets of a finite ordered ground set, encoded as bitmasks."""

    ground: tuple

    @property
    def top(self) -> int:
        return (1 << len(self.ground)) - 1

    def elements(self) -> range:
        return range(self.top + 1)

    def complement(self, x: int) -> int:
        return self.top & ~x

    def is_perp(self, x: int, y: int) -> bool:
        return x & y == 0

    def oplus(self, x: int, y: int) -> int:
        if x & y:
            raise Undefined("overlapping subsets")
        return x | y

    def atoms(self) -> list[int]:
        return [1 << i for i in range(len(self.ground))]

    def members(self, x: int) -> list:
        return [w for i, w in enumerate(self.ground) if x >> i & 1]


def algebra_from_json(doc: dict, **tolerances) -> IntervalEffectAlgebra:
    if not isinstance(doc, dict) or "group" not in doc or "unit" not in doc:
        raise DocumentError("algebra document needs 'group' and 'unit'")
    group = group_from_json(doc["group"], **tolerances)
    unit = element_from_json(group, doc["unit"])
    try:
        ambient = UnitalGroup(group, unit)
    except (ValueError, GroupMismatch) as exc:
        raise DocumentError(str(exc)) from exc
    return IntervalEffectAlgebra(ambient, doc.get("name"))


def effect_from_json(E: IntervalEffectAlgebra, raw) -> Effect:
    x = element_from_json(E.group, raw)
    try:
        return E.effect(x)
    except OutOfInterval as exc:
        raise DocumentError(str(exc)) from exc


def sum_effects(E: IntervalEffectAlgebra, xs: Iterable[Element]) -> Element:
    return total(E.group, xs)
