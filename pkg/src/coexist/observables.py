"""Simple observables induced by a witness mapping and their projective system.

For a verified witness ``beta`` and ``A <= S`` the observable ``alpha_A`` lives
on the powerset of ``Omega_A = {X : X <= A}`` and sends the atom ``{X}`` to
``D(X, A)``. Outcomes are stored as absolute bitmasks over ``S`` (submasks of
``A``), so the connecting map ``g_{U,V}(X) = X & U`` is a single AND.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .effects import Effect, IntervalEffectAlgebra
from .errors import SizeExceeded, UnverifiedWitness
from .groups import Element, HermitianGroup, max_abs
from .witness import BetaTable, WitnessReport, indices, max_ground_default, submasks

DEFAULT_MAX_OUTCOMES = 16
EXHAUSTIVE_FAMILY_BITS = 4


@dataclass(frozen=True)
class SimpleObservable:
    """A morphism from the powerset of ``outcomes`` into ``algebra``, given by its atoms."""

    algebra: IntervalEffectAlgebra
    outcomes: tuple
    atoms: tuple

    def __post_init__(self):
        if len(self.outcomes) != len(self.atoms):
            raise ValueError("one atom value per outcome required")
        if len(set(self.outcomes)) != len(self.outcomes):
            raise ValueError("outcomes must be distinct")
        E = self.algebra
        atoms = tuple(E.effect(a) for a in self.atoms)
        acc = E.group.zero()
        for a in atoms:
            acc = acc + a
        if acc != E.unit:
            raise ValueError("atom values do not form a decomposition of unit")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "_pos", {w: i for i, w in enumerate(self.outcomes)})

    def atom(self, outcome) -> Effect:
        return self.atoms[self._position(outcome)]

    def _position(self, outcome) -> int:
        try:
            return self._pos[outcome]
        except KeyError:
            raise KeyError(f"unknown outcome {outcome!r}") from None

    def __call__(self, outcome_set: Iterable) -> Effect:
        return observable_eval(self, outcome_set)


def observable_eval(alpha: SimpleObservable, outcome_set: Iterable) -> Effect:
    """Sum of the atom values over ``outcome_set`` (always defined)."""
    E = alpha.algebra
    chosen = {alpha._position(w) for w in outcome_set}
    acc = E.group.zero()
    for i in sorted(chosen):
        acc = acc + alpha.atoms[i]
    return E.effect(acc)


def _require_witness(beta: BetaTable) -> WitnessReport:
    report = beta.report
    if not report.passed:
        raise UnverifiedWitness(
            f"beta is not a witness mapping ({len(report.violations)} violations)")
    return report


def observable_from_witness(beta: BetaTable, a: int) -> SimpleObservable:
    """``alpha_A``: outcome ``X <= A`` carries ``D(X, A)``."""
    report = _require_witness(beta)
    E = beta.algebra
    outcomes = tuple(submasks(a))
    atoms = tuple(E.effect(report.dtable[(x, a)]) for x in outcomes)
    return SimpleObservable(E, outcomes, atoms)


def connecting_map(u: int, v: int, x: int) -> int:
    """``g_{U,V}``: restrict an outcome of ``Omega_V`` to ``U``."""
    if u & ~v:
        raise ValueError(f"{indices(u)} is not a subset of {indices(v)}")
    return x & u


@dataclass
class ProjectiveSystem:
    beta: BetaTable
    observables: dict

    @property
    def ground(self):
        return self.beta.ground

    def index_set(self) -> list[int]:
        return sorted(self.observables)

    def g(self, u: int, v: int, x: int) -> int:
        return connecting_map(u, v, x)

    def preimage(self, u: int, v: int, family: Iterable[int]) -> list[int]:
        """``g_{U,V}^{-1}`` of a family of outcomes, computed set-theoretically."""
        fam = set(family)
        return [y for y in self.observables[v].outcomes if self.g(u, v, y) in fam]


def projective_system_from_witness(beta: BetaTable, max_ground: int | None = None) -> ProjectiveSystem:
    cap = max_ground_default() if max_ground is None else max_ground
    if len(beta.ground) > cap:
        raise SizeExceeded(f"|S| = {len(beta.ground)} exceeds the ground-set cap {cap}")
    _require_witness(beta)
    full = beta.ground.full
    return ProjectiveSystem(beta, {a: observable_from_witness(beta, a) for a in range(full + 1)})


@dataclass
class ProjectiveReport:
    passed: bool
    identity_checks: int
    composition_checks: int
    compatibility_checks: int
    compatibility_mode: str
    max_residual: float
    tolerance: float | None
    failures: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "identity_checks": self.identity_checks,
            "composition_checks": self.composition_checks,
            "compatibility_checks": self.compatibility_checks,
            "compatibility_mode": self.compatibility_mode,
            "max_residual": self.max_residual,
            "tolerance": self.tolerance,
            "failures": self.failures,
        }


def _family_members(omega: Sequence[int], bits: int) -> list[int]:
    return [w for i, w in enumerate(omega) if bits >> i & 1]


def check_projective(sys: ProjectiveSystem) -> ProjectiveReport:
    """Check identity (i), composition (ii) and compatibility (iii).

    (iii) runs over every family of outcomes when ``|U| <= 4``; above that it
    runs over single atoms, which is equivalent because both sides are
    additive over disjoint families.
    """
    idx = sys.index_set()
    E = sys.beta.algebra
    failures = []
    ids = 0
    for u in idx:
        for x in sys.observables[u].outcomes:
            ids += 1
            if sys.g(u, u, x) != x:
                failures.append({"condition": "i", "U": indices(u), "X": indices(x)})
    comps = 0
    for w in idx:
        for v in submasks(w):
            for u in submasks(v):
                for x in sys.observables[w].outcomes:
                    comps += 1
                    if sys.g(u, v, sys.g(v, w, x)) != sys.g(u, w, x):
                        failures.append({"condition": "ii", "U": indices(u), "V": indices(v),
                                         "W": indices(w), "X": indices(x)})
    compat = 0
    worst = 0.0
    exhaustive = True
    for v in idx:
        alpha_v = sys.observables[v]
        for u in submasks(v):
            alpha_u = sys.observables[u]
            omega = alpha_u.outcomes
            if len(omega) <= 1 << EXHAUSTIVE_FAMILY_BITS:
                families = (_family_members(omega, bits) for bits in range(1 << len(omega)))
            else:
                exhaustive = False
                families = ([w] for w in omega)
            for fam in families:
                compat += 1
                lhs = observable_eval(alpha_u, fam)
                rhs = observable_eval(alpha_v, sys.preimage(u, v, fam))
                worst = max(worst, max_abs(lhs - rhs))
                if lhs != rhs:
                    failures.append({"condition": "iii", "U": indices(u), "V": indices(v),
                                     "family": [indices(x) for x in fam]})
    g = E.group
    return ProjectiveReport(
        passed=not failures,
        identity_checks=ids,
        composition_checks=comps,
        compatibility_checks=compat,
        compatibility_mode="all_families" if exhaustive else "atoms",
        max_residual=worst,
        tolerance=g.eq_tolerance if isinstance(g, HermitianGroup) else None,
        failures=failures,
    )


def range_witness(alpha: SimpleObservable, e: Element,
                  max_outcomes: int = DEFAULT_MAX_OUTCOMES) -> list | None:
    """An outcome set evaluating to ``e``, smallest first, or ``None``."""
    n = len(alpha.outcomes)
    if n > max_outcomes:
        raise SizeExceeded(f"observable has {n} outcomes (cap {max_outcomes})")
    for k in range(n + 1):
        for combo in combinations(alpha.outcomes, k):
            if observable_eval(alpha, combo) == e:
                return list(combo)
    return None


def range_contains(alpha: SimpleObservable, e: Element,
                   max_outcomes: int = DEFAULT_MAX_OUTCOMES) -> bool:
    return range_witness(alpha, e, max_outcomes) is not None


@dataclass
class CoexistenceCertificate:
    beta: BetaTable
    report: WitnessReport
    system: ProjectiveSystem
    projective: ProjectiveReport
    range_witnesses: list

    def to_json(self) -> dict:
        S = self.beta.ground
        return {
            "S": S.to_json(),
            "beta": self.beta.to_json(),
            "verification": self.report.to_json(),
            "observables": [
                {"A": indices(a),
                 "atoms": [{"X": indices(x), "value": v.to_json()}
                           for x, v in zip(obs.outcomes, obs.atoms)]}
                for a, obs in sorted(self.system.observables.items())
            ],
            "projective_checks": self.projective.to_json(),
            "range_witnesses": [
                {"element": S[i].to_json(), "A": indices(a), "outcome_set": [indices(x) for x in fam]}
                for i, a, fam in self.range_witnesses
            ],
        }


@dataclass
class Certification:
    passed: bool
    report: WitnessReport
    certificate: CoexistenceCertificate | None = None
    problems: list = field(default_factory=list)

    def to_json(self) -> dict:
        if self.certificate is not None:
            doc = self.certificate.to_json()
            doc["coexistent"] = self.passed
            doc["problems"] = self.problems
            return doc
        return {"coexistent": False, "verification": self.report.to_json(), "problems": self.problems}


def certify_coexistent(beta: BetaTable, max_ground: int | None = None) -> Certification:
    """Verify ``beta``, build the projective system, and collect range witnesses."""
    report = beta.report
    if not report.passed:
        return Certification(False, report, None, ["witness verification failed"])
    sys = projective_system_from_witness(beta, max_ground)
    proj = check_projective(sys)
    problems = [] if proj.passed else ["projective system conditions failed"]
    witnesses = []
    for i, s in enumerate(beta.ground):
        a = 1 << i
        fam = range_witness(sys.observables[a], s)
        if fam is None:
            problems.append(f"element {i} not in the range of its observable")
        else:
            witnesses.append((i, a, fam))
    cert = CoexistenceCertificate(beta, report, sys, proj, witnesses)
    return Certification(not problems, report, cert, problems)
