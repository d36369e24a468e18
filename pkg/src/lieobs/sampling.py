"""Seeded random (group, homomorphism, field) instances with a mix of verdicts."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .flow import FieldSpec
from .groups import GroupClass, GroupKind
from .subgroups import HomSpec, canonical_homomorphisms, make_hom, subgroup_catalog


@dataclass(frozen=True, eq=False)
class Instance:
    cls: GroupClass
    field: FieldSpec
    hom: HomSpec


def random_class(rng: np.random.Generator) -> GroupClass:
    kind = list(GroupKind)[rng.integers(len(GroupKind))]
    if kind is GroupKind.R3Lambda:
        lam = float(rng.choice([-1, 1]) * rng.uniform(0.1, 1.0))
        return GroupClass(kind, lam)
    if kind is GroupKind.R3PrimeLambda:
        return GroupClass(kind, float(rng.choice([-1, 1]) * rng.uniform(0.1, 1.5)))
    return GroupClass(kind)


def random_dstar(rng: np.random.Generator) -> np.ndarray:
    kind = rng.integers(6)
    a, b = rng.uniform(-1.5, 1.5, 2)
    if kind == 0:
        return np.diag(rng.uniform(-1.5, 1.5, 2))
    if kind == 1:
        return np.array([[a, 1.0], [0.0, a]])
    if kind == 2:
        return np.array([[a, -b], [b, a]])
    if kind == 3:
        return a * np.eye(2)
    if kind == 4:
        # rank one
        u, w = rng.normal(size=2), rng.normal(size=2)
        return np.outer(u, w) / max(1.0, np.linalg.norm(u) * np.linalg.norm(w))
    return rng.uniform(-1.5, 1.5, (2, 2))


def random_xi(rng: np.random.Generator) -> np.ndarray:
    xi = rng.uniform(-1.5, 1.5, 2)
    xi[rng.random(2) < 0.25] = 0.0
    return xi


def random_hom(cls: GroupClass, rng: np.random.Generator) -> HomSpec:
    target = subgroup_catalog(cls)[rng.integers(len(subgroup_catalog(cls)))]
    fams = canonical_homomorphisms(cls, target)
    fam = fams[rng.integers(len(fams))]
    coeffs = {n: (0.0 if rng.random() < 0.3 else float(rng.uniform(-2, 2))) for n in fam.free}
    return make_hom(cls, target, coeffs, fam.name)


def random_instance(rng: np.random.Generator) -> Instance:
    cls = random_class(rng)
    return Instance(cls, FieldSpec(random_dstar(rng), random_xi(rng)), random_hom(cls, rng))


def random_instances(n: int, seed: int = 0) -> list:
    rng = np.random.default_rng(seed)
    return [random_instance(rng) for _ in range(n)]
