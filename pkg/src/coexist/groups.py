"""Partially ordered abelian groups with decidable positivity.

Two carriers are supported:

* integer vectors ``Z^n`` ordered either coordinatewise or by a finitely
  generated conical submonoid (``ConeSpec``);
* finite-dimensional Hermitian matrices under the Loewner order.

Integer arithmetic uses Python ints, so alternating sums are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import DocumentError, GroupMismatch

IntVector = tuple  # tuple[int, ...]

DEFAULT_PSD_TOL = 1e-9


def _as_int_vector(entries: Iterable[int], dimension: int | None = None) -> IntVector:
    vec = tuple(entries)
    for e in vec:
        if isinstance(e, bool) or not isinstance(e, (int, np.integer)):
            raise TypeError(f"integer entries required, got {e!r}")
    vec = tuple(int(e) for e in vec)
    if not vec:
        raise ValueError("integer vectors must have dimension >= 1")
    if dimension is not None and len(vec) != dimension:
        raise GroupMismatch(f"expected dimension {dimension}, got {len(vec)}")
    return vec


def _dot(f: IntVector, x: IntVector) -> int:
    return sum(a * b for a, b in zip(f, x))


@dataclass(frozen=True)
class ConeSpec:
    """Generators of a conical submonoid plus a strictly positive functional.

    ``functional`` defaults to the all-ones vector. Every generator must
    evaluate strictly positive under it, which both proves conicality and
    bounds coefficient search in :func:`cone_contains`.
    """

    generators: tuple
    functional: tuple = None

    def __post_init__(self):
        gens = tuple(_as_int_vector(g) for g in self.generators)
        if not gens:
            raise ValueError("cone needs at least one generator")
        dim = len(gens[0])
        if any(len(g) != dim for g in gens):
            raise ValueError("cone generators have mixed dimensions")
        f = (1,) * dim if self.functional is None else _as_int_vector(self.functional, dim)
        for g in gens:
            if _dot(f, g) <= 0:
                raise ValueError(f"functional {f} is not strictly positive on generator {g}")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "functional", f)

    @property
    def dimension(self) -> int:
        return len(self.functional)

    def weight(self, x: IntVector) -> int:
        return _dot(self.functional, x)

    @property
    def min_weight(self) -> int:
        return min(self.weight(g) for g in self.generators)


def cone_contains(cone: ConeSpec, x: Sequence[int]) -> bool:
    """Decide whether ``x`` is a nonnegative integer combination of the generators.

    Each coefficient is bounded by ``f(x) / min f(g)``; the search branches
    generator by generator on the remaining vector and memoizes dead ends.
    """
    x = _as_int_vector(x, cone.dimension)
    gens = cone.generators
    weights = [cone.weight(g) for g in gens]

    @lru_cache(maxsize=None)
    def reachable(i: int, rem: IntVector) -> bool:
        if not any(rem):
            return True
        budget = cone.weight(rem)
        if budget <= 0 or i == len(gens):
            return False
        g, w = gens[i], weights[i]
        for k in range(budget // w + 1):
            nxt = tuple(r - k * c for r, c in zip(rem, g))
            if reachable(i + 1, nxt):
                return True
        return False

    return reachable(0, x)


class OrderedGroup:
    """Common interface of the carriers. Values are opaque per subclass."""

    kind: str

    def element(self, raw) -> "Element":
        return Element(self, self._coerce(raw))

    def zero(self) -> "Element":
        raise NotImplementedError

    def is_positive(self, x: "Element") -> bool:
        raise NotImplementedError

    def leq(self, x: "Element", y: "Element") -> bool:
        return self.is_positive(subtract(y, x))

    def equals(self, x: "Element", y: "Element") -> bool:
        raise NotImplementedError

    # raw-value hooks used by Element
    def _coerce(self, raw):
        raise NotImplementedError

    def _add(self, v, w):
        raise NotImplementedError

    def _neg(self, v):
        raise NotImplementedError

    def _scale(self, k: int, v):
        raise NotImplementedError

    def _hash(self, v) -> int:
        raise TypeError(f"elements of {self.kind} groups are not hashable")

    def value_to_json(self, v):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class IntVectorGroup(OrderedGroup):
    """``Z^dimension`` with the coordinatewise order, or the order of ``cone``."""

    dimension: int
    cone: ConeSpec | None = None

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        if self.cone is not None and self.cone.dimension != self.dimension:
            raise ValueError("cone generators do not match the group dimension")

    @property
    def kind(self) -> str:
        return "int_coordinatewise" if self.cone is None else "int_cone"

    @property
    def functional(self) -> IntVector:
        """Strictly positive functional on nonzero positive elements."""
        return (1,) * self.dimension if self.cone is None else self.cone.functional

    def _coerce(self, raw):
        if isinstance(raw, (int, np.integer)) and not isinstance(raw, bool):
            raw = (raw,)
        return _as_int_vector(raw, self.dimension)

    def zero(self):
        return Element(self, (0,) * self.dimension)

    def _add(self, v, w):
        return tuple(a + b for a, b in zip(v, w))

    def _neg(self, v):
        return tuple(-a for a in v)

    def _scale(self, k, v):
        return tuple(k * a for a in v)

    def _hash(self, v):
        return hash(v)

    def is_positive(self, x):
        _check(self, x)
        if self.cone is None:
            return all(a >= 0 for a in x.value)
        return cone_contains(self.cone, x.value)

    def equals(self, x, y):
        _check(self, x, y)
        return x.value == y.value

    def value_to_json(self, v):
        return list(v)

    def to_json(self):
        if self.cone is None:
            return {"kind": "int_coordinatewise", "dimension": self.dimension}
        return {
            "kind": "int_cone",
            "dimension": self.dimension,
            "cone": {
                "generators": [list(g) for g in self.cone.generators],
                "functional": list(self.cone.functional),
            },
        }


@dataclass(frozen=True)
class HermitianGroup(OrderedGroup):
    """Hermitian ``d x d`` matrices under the Loewner order.

    ``psd_tolerance`` is the eigenvalue cutoff for positivity. ``eq_tolerance``
    bounds entrywise equality and defaults to ``psd_tolerance``.
    """

    dimension: int
    psd_tolerance: float = DEFAULT_PSD_TOL
    eq_tolerance: float | None = field(default=None)

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        if self.psd_tolerance < 0:
            raise ValueError("psd_tolerance must be nonnegative")
        if self.eq_tolerance is None:
            object.__setattr__(self, "eq_tolerance", self.psd_tolerance)
        elif self.eq_tolerance < 0:
            raise ValueError("eq_tolerance must be nonnegative")

    kind = "hermitian"

    def _coerce(self, raw):
        m = np.array(raw, dtype=complex)
        d = self.dimension
        if m.shape != (d, d):
            raise GroupMismatch(f"expected a {d}x{d} matrix, got shape {m.shape}")
        asym = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if asym > max(self.eq_tolerance, 1e-12):
            raise ValueError(f"matrix is not Hermitian (asymmetry {asym:.3e})")
        m = (m + m.conj().T) / 2
        m.setflags(write=False)
        return m

    def zero(self):
        return self.element(np.zeros((self.dimension, self.dimension)))

    def identity(self):
        return self.element(np.eye(self.dimension))

    def _add(self, v, w):
        r = v + w
        r.setflags(write=False)
        return r

    def _neg(self, v):
        r = -v
        r.setflags(write=False)
        return r

    def _scale(self, k, v):
        r = k * v
        r.setflags(write=False)
        return r

    def eigenvalues(self, x) -> np.ndarray:
        _check(self, x)
        return np.linalg.eigvalsh(x.value)

    def min_eigenvalue(self, x) -> float:
        return float(self.eigenvalues(x)[0])

    def is_positive(self, x):
        return self.min_eigenvalue(x) >= -self.psd_tolerance

    def equals(self, x, y):
        _check(self, x, y)
        return float(np.max(np.abs(x.value - y.value))) <= self.eq_tolerance

    def value_to_json(self, v):
        return [[[float(z.real), float(z.imag)] for z in row] for row in v]

    def to_json(self):
        return {
            "kind": "hermitian",
            "dimension": self.dimension,
            "psd_tolerance": self.psd_tolerance,
            "eq_tolerance": self.eq_tolerance,
        }


Group = Union[IntVectorGroup, HermitianGroup]


class Element:
    """A value tagged with the group it lives in. Immutable."""

    __slots__ = ("group", "value")

    def __init__(self, group: OrderedGroup, value):
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "value", value)

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    def __add__(self, other: "Element") -> "Element":
        return add(self, other)

    def __sub__(self, other: "Element") -> "Element":
        return subtract(self, other)

    def __neg__(self) -> "Element":
        return negate(self)

    def __rmul__(self, k: int) -> "Element":
        return scalar_multiply(k, self)

    def __eq__(self, other):
        if not isinstance(other, Element):
            return NotImplemented
        if not _same_group(self.group, other.group):
            return False
        return self.group.equals(self, other)

    def __hash__(self):
        return self.group._hash(self.value)

    def __repr__(self):
        if isinstance(self.group, IntVectorGroup):
            return f"Element{self.value}"
        return f"Element({np.array2string(np.real_if_close(self.value), precision=4)})"

    def to_json(self):
        return self.group.value_to_json(self.value)


def _same_group(g, h) -> bool:
    return g is h or g == h


def _check(group, *xs: Element) -> None:
    for x in xs:
        if not _same_group(group, x.group):
            raise GroupMismatch(f"element of {x.group!r} used in {group!r}")


def add(x: Element, y: Element) -> Element:
    _check(x.group, y)
    return Element(x.group, x.group._add(x.value, y.value))


def negate(x: Element) -> Element:
    return Element(x.group, x.group._neg(x.value))


def subtract(x: Element, y: Element) -> Element:
    _check(x.group, y)
    return Element(x.group, x.group._add(x.value, y.group._neg(y.value)))


def scalar_multiply(k: int, x: Element) -> Element:
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)):
        raise TypeError("scalar must be an integer")
    return Element(x.group, x.group._scale(int(k), x.value))


def total(group: OrderedGroup, xs: Iterable[Element]) -> Element:
    acc = group.zero()
    for x in xs:
        acc = add(acc, x)
    return acc


def is_positive(group: OrderedGroup, x: Element) -> bool:
    return group.is_positive(x)


def leq(group: OrderedGroup, x: Element, y: Element) -> bool:
    _check(group, x, y)
    return group.leq(x, y)


def equals(group: OrderedGroup, x: Element, y: Element) -> bool:
    return group.equals(x, y)


def max_abs(x: Element) -> float:
    """Largest absolute entry; the residual norm used in tolerance reports."""
    v = x.value
    if isinstance(v, tuple):
        return float(max(abs(a) for a in v))
    return float(np.max(np.abs(v)))


@dataclass(frozen=True)
class UnitalGroup:
    """A carrier paired with a positive nonzero unit ``u``."""

    group: Group
    unit: Element

    def __post_init__(self):
        _check(self.group, self.unit)
        if not self.group.is_positive(self.unit):
            raise ValueError("unit must be positive")
        if self.group.equals(self.unit, self.group.zero()):
            raise ValueError("unit must be nonzero")

    def to_json(self) -> dict:
        return {"group": self.group.to_json(), "unit": self.unit.to_json()}


def group_from_json(doc: dict, *, psd_tolerance: float | None = None,
                    eq_tolerance: float | None = None) -> Group:
    """Parse a group document; tolerance arguments override document values."""
    try:
        kind = doc["kind"]
        if kind == "int_coordinatewise":
            return IntVectorGroup(int(doc["dimension"]))
        if kind == "int_cone":
            cone = doc["cone"]
            spec = ConeSpec(tuple(tuple(g) for g in cone["generators"]),
                            None if cone.get("functional") is None else tuple(cone["functional"]))
            return IntVectorGroup(int(doc.get("dimension", spec.dimension)), spec)
        if kind == "hermitian":
            psd = psd_tolerance if psd_tolerance is not None else doc.get("psd_tolerance", DEFAULT_PSD_TOL)
            eq = eq_tolerance if eq_tolerance is not None else doc.get("eq_tolerance")
            return HermitianGroup(int(doc["dimension"]), float(psd), None if eq is None else float(eq))
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"invalid group document: {exc}") from exc
    raise DocumentError(f"unknown group kind {doc.get('kind')!r}")


def element_from_json(group: Group, raw) -> Element:
    try:
        if isinstance(group, HermitianGroup):
            rows = [[complex(p[0], p[1]) if isinstance(p, (list, tuple)) else complex(p) for p in row]
                    for row in raw]
            return group.element(rows)
        return group.element(raw)
    except (TypeError, ValueError, IndexError, GroupMismatch) as exc:
        raise DocumentError(f"invalid element {raw!r}: {exc}") from exc
