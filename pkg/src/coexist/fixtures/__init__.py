"""Bundled algebras and example documents.

``CHAIN4``  the chain 0 < 1 < 2 < 3 inside Z.
``BOOL2``   the four-element Boolean algebra inside Z^2.
``C2xC3``   product of a 2-chain and a 3-chain inside Z^2.
``PENTA``   a five-element interval of Z^2 ordered by the cone on
            (1,0), (1,1), (1,2); lattice-ordered but not MV.
``QUBIT``   2x2 Hermitian effects, 0 <= x <= I.
"""

from __future__ import annotations

import json
from importlib import resources

from ..effects import IntervalEffectAlgebra, algebra_from_json

ALGEBRAS = ("CHAIN4", "BOOL2", "C2xC3", "PENTA", "QUBIT")


def fixture_text(name: str) -> str:
    return resources.files(__package__).joinpath(f"{name}.json").read_text()


def fixture_document(name: str) -> dict:
    return json.loads(fixture_text(name))


def names() -> list[str]:
    return sorted(p.name[:-5] for p in resources.files(__package__).iterdir() if p.name.endswith(".json"))


def load(name: str, **tolerances) -> IntervalEffectAlgebra:
    if name not in ALGEBRAS:
        raise KeyError(f"unknown algebra fixture {name!r}; choose from {', '.join(ALGEBRAS)}")
    return algebra_from_json(fixture_document(name), **tolerances)
