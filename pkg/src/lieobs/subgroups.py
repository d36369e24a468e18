"""Simply connected subgroups, the homomorphism families onto them, and their kernels.

Every homomorphism in the catalog is linear in the coordinates (t, x, y), so
a family is a 3x3 template whose entries are coefficient names or constants.
Coefficients are named ``alpha1 .. beta3``; each family pins some of them
(fixed value) and leaves the rest free.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .groups import GroupClass, GroupKind, multiply

COEFF_NAMES = ("alpha1", "alpha2", "alpha3", "beta1", "beta2", "beta3")
_ZERO_TOL = 1e-12


class UnknownTarget(KeyError):
    pass


class NonCanonicalHom(ValueError):
    pass


@dataclass(frozen=True)
class SubgroupId:
    cls: GroupClass
    index: int

    @property
    def name(self) -> str:
        return f"G{self.index}"

    @property
    def mask(self) -> Tuple[int, int, int]:
        return _SUBGROUPS[_family_key(self.cls)][self.index - 1][0]

    @property
    def isomorphic_to(self) -> str:
        return _SUBGROUPS[_family_key(self.cls)][self.index - 1][1]

    @property
    def definition(self) -> str:
        parts = ["R" if m else "{0}" for m in self.mask]
        return f"{parts[0]} x ({parts[1]} x {parts[2]})"

    def contains(self, g, tol: float = _ZERO_TOL) -> bool:
        g = np.asarray(g, dtype=float)
        return bool(np.all(np.abs(g[np.array(self.mask) == 0]) <= tol))


# (free-coordinate mask, isomorphism label) per subgroup index
_SUBGROUPS = {
    "R2": [((1, 1, 0), "R^2"), ((1, 0, 1), "Aff_2(R)"), ((0, 1, 1), "R^2"),
           ((0, 0, 1), "R"), ((0, 1, 0), "R"), ((1, 0, 0), "R")],
    "R3": [((1, 1, 0), "Aff_2(R)"), ((0, 1, 1), "R^2"), ((0, 0, 1), "R"),
           ((0, 1, 0), "R"), ((1, 0, 0), "R")],
    "R3Lambda": [((0, 1, 1), "R^2"), ((1, 1, 0), "Aff_2(R)"), ((1, 0, 1), "Aff_2(R)"),
                 ((1, 0, 0), "R"), ((0, 1, 0), "R"), ((0, 0, 1), "R")],
    "rotational": [((0, 1, 1), "R^2"), ((1, 0, 0), "R")],
}


def _family_key(cls: GroupClass) -> str:
    if cls.kind in (GroupKind.R3PrimeLambda, GroupKind.E):
        return "rotational"
    return cls.kind.value


def subgroup_catalog(cls: GroupClass) -> List[SubgroupId]:
    return [SubgroupId(cls, i + 1) for i in range(len(_SUBGROUPS[_family_key(cls)]))]


def subgroup(cls: GroupClass, target: Union[str, int, SubgroupId]) -> SubgroupId:
    if isinstance(target, SubgroupId):
        if target.cls != cls:
            raise UnknownTarget(f"{target.name} belongs to {target.cls.label}, not {cls.label}")
        return target
    if isinstance(target, str):
        if not (target.upper().startswith("G") and target[1:].isdigit()):
            raise UnknownTarget(target)
        target = int(target[1:])
    n = len(_SUBGROUPS[_family_key(cls)])
    if not 1 <= int(target) <= n:
        raise UnknownTarget(f"G{target} is not a subgroup of {cls.label} (G1..G{n})")
    return SubgroupId(cls, int(target))


# ------------------------------------------------------------------ families

Entry = Union[str, float]


@dataclass(frozen=True)
class HomFamily:
    name: str
    template: Tuple[Tuple[Entry, Entry, Entry], ...]
    fixed: Dict[str, float]
    rule: str

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(n for n in COEFF_NAMES if any(e == n for row in self.template for e in row))

    @property
    def free(self) -> Tuple[str, ...]:
        return tuple(n for n in self.names if n not in self.fixed)

    def formula(self) -> str:
        out = []
        for row in self.template:
            terms = []
            for e, var in zip(row, "txy"):
                if isinstance(e, str) and e not in self.fixed:
                    terms.append(f"{e}*{var}")
                else:
                    val = self.fixed.get(e, 0.0) if isinstance(e, str) else e
                    if val == 1.0:
                        terms.append(var)
                    elif val != 0.0:
                        terms.append(f"{val:g}*{var}")
            out.append(" + ".join(terms) or "0")
        return "h(t,x,y) = (" + ", ".join(out) + ")"


_A = ("alpha1", "alpha2", "alpha3")
_B = ("beta1", "beta2", "beta3")
_O = (0.0, 0.0, 0.0)


def _fix(*names, **values) -> Dict[str, float]:
    out = {n: 0.0 for n in names}
    out.update({k: float(v) for k, v in values.items()})
    return out


_ZERO_FAMILY = HomFamily("zero", (_O, _O, _O), {}, "zero")


def _families(cls: GroupClass, index: int) -> List[HomFamily]:
    key = _family_key(cls)
    if key == "R2":
        table = {
            1: [HomFamily("affine", (_A, _B, _O), _fix("alpha3", "beta3"), "matrix")],
            2: [HomFamily("graph", (_A, _O, _B),
                          _fix("alpha2", "alpha3", "beta1", "beta2", alpha1=1), "beta3"),
                _ZERO_FAMILY],
            3: [HomFamily("linear", (_O, _A, _B), _fix("alpha3", "beta3"), "matrix")],
            4: [HomFamily("row", (_O, _O, _A), _fix("alpha3"), "row")],
            5: [HomFamily("row", (_O, _A, _O), _fix("alpha3"), "row")],
            6: [HomFamily("row", (_A, _O, _O), _fix("alpha3"), "row")],
        }
    elif key == "R3":
        table = {
            1: [HomFamily("graph", (_A, _B, _O),
                          _fix("alpha2", "alpha3", "beta1", "beta2", alpha1=1), "beta3"),
                _ZERO_FAMILY],
            2: [HomFamily("time", (_O, _A, _B), _fix("alpha2", "alpha3", "beta2", "beta3"), "time")],
            3: [HomFamily("time", (_O, _O, _A), _fix("alpha2", "alpha3"), "time")],
            4: [HomFamily("time", (_O, _A, _O), _fix("alpha2", "alpha3"), "time")],
            5: [HomFamily("time", (_A, _O, _O), _fix("alpha2", "alpha3"), "time")],
        }
    elif key == "R3Lambda":
        table = {
            1: [HomFamily("time", (_O, _A, _B), _fix("alpha2", "alpha3", "beta2", "beta3"), "time")],
            2: [HomFamily("graph", (_A, _B, _O),
                          _fix("alpha2", "alpha3", "beta1", "beta3", alpha1=1), "beta2"),
                _ZERO_FAMILY],
            # image (t/lambda, 0, beta2 x): Aff_2 -> G3 isomorphism composed with the G2 family
            3: [HomFamily("graph", (_A, _O, _B),
                          _fix("alpha2", "alpha3", "beta1", "beta3", alpha1=1.0 / cls.lam),
                          "beta2"),
                _ZERO_FAMILY],
            4: [HomFamily("time", (_A, _O, _O), _fix("alpha2", "alpha3"), "time")],
            5: [HomFamily("time", (_O, _A, _O), _fix("alpha2", "alpha3"), "time")],
            6: [HomFamily("time", (_O, _O, _A), _fix("alpha2", "alpha3"), "time")],
        }
    else:
        table = {
            1: [HomFamily("time", (_O, _A, _B), _fix("alpha2", "alpha3", "beta2", "beta3"), "time")],
            2: [HomFamily("time", (_A, _O, _O), _fix("alpha2", "alpha3"), "time")],
        }
    return table[index]


def canonical_homomorphisms(cls: GroupClass, target) -> List[HomFamily]:
    return list(_families(cls, subgroup(cls, target).index))


@dataclass(frozen=True, eq=False)
class HomSpec:
    cls: GroupClass
    target: SubgroupId
    family: HomFamily
    coeffs: Dict[str, float] = field(default_factory=dict)

    def matrix(self) -> np.ndarray:
        m = np.zeros((3, 3))
        for i, row in enumerate(self.family.template):
            for j, e in enumerate(row):
                m[i, j] = self.coeffs.get(e, 0.0) if isinstance(e, str) else e
        return m

    @property
    def is_canonical(self) -> bool:
        return all(abs(self.coeffs.get(n, 0.0) - v) <= _ZERO_TOL
                   for n, v in self.family.fixed.items())

    def to_dict(self) -> dict:
        return {"target": self.target.name, "family": self.family.name,
                "coeffs": {k: float(v) for k, v in sorted(self.coeffs.items())},
                "formula": self.family.formula()}


def make_hom(cls: GroupClass, target, coeffs: Optional[Dict[str, float]] = None,
             family: Optional[str] = None, allow_noncanonical: bool = False) -> HomSpec:
    """Build a HomSpec; pinned coefficients default to their fixed values.

    Passing a pinned coefficient with a different value raises NonCanonicalHom
    unless ``allow_noncanonical`` is set (useful for exercising hom_validate).
    """
    sub = subgroup(cls, target)
    fams = _families(cls, sub.index)
    if family is None:
        fam = fams[0]
    else:
        matches = [f for f in fams if f.name == family]
        if not matches:
            raise UnknownTarget(f"no family {family!r} for {sub.name} of {cls.label}; "
                                f"choose from {[f.name for f in fams]}")
        fam = matches[0]
    coeffs = {k: float(v) for k, v in (coeffs or {}).items()}
    unknown = set(coeffs) - set(fam.names)
    if unknown:
        raise NonCanonicalHom(f"coefficients {sorted(unknown)} do not appear in {fam.formula()}")
    full = {n: 0.0 for n in fam.names}
    full.update(fam.fixed)
    full.update(coeffs)
    spec = HomSpec(cls, sub, fam, full)
    if not spec.is_canonical and not allow_noncanonical:
        bad = [n for n, v in fam.fixed.items() if abs(full[n] - v) > _ZERO_TOL]
        raise NonCanonicalHom(f"{', '.join(bad)} pinned by {fam.formula()}")
    return spec


def hom_apply(h: HomSpec, g) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    return np.einsum("ij,...j->...i", h.matrix(), g)


@dataclass(frozen=True)
class HomValidation:
    ok: bool
    law_residual: float
    image_residual: float

    def to_dict(self) -> dict:
        return {"ok": self.ok, "law_residual": self.law_residual,
                "image_residual": self.image_residual}


def hom_validate(cls: GroupClass, h: HomSpec, samples: int = 200, seed: int = 0,
                 tol: float = 1e-9) -> HomValidation:
    """Sampled check of h(g g') = h(g) h(g') and of h(G) lying in the target subgroup."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    g = rng.uniform(-2, 2, (samples, 3))
    k = rng.uniform(-2, 2, (samples, 3))
    lhs = hom_apply(h, multiply(cls, g, k))
    rhs = multiply(cls, hom_apply(h, g), hom_apply(h, k))
    law = float(np.max(np.linalg.norm(lhs - rhs, axis=-1) / (1.0 + np.linalg.norm(lhs, axis=-1))))
    outside = np.array(h.target.mask) == 0
    image = float(np.max(np.abs(hom_apply(h, g)[:, outside]), initial=0.0))
    return HomValidation(law < tol and image < tol, law, image)


# ------------------------------------------------------------------ kernels

class KernelKind(str, enum.Enum):
    FullGroup = "FullGroup"
    PlaneT0 = "PlaneT0"
    PlaneX0 = "PlaneX0"
    PlaneTilted = "PlaneTilted"
    LineYAxis = "LineYAxis"
    LineXAxis = "LineXAxis"
    Linear = "Linear"       # any other linear subspace (e.g. the image of a kernel under conjugation)


_KERNEL_TEXT = {
    KernelKind.FullGroup: "G",
    KernelKind.PlaneT0: "{t = 0}",
    KernelKind.PlaneX0: "{x = 0}",
    KernelKind.LineYAxis: "{t = x = 0}",
    KernelKind.LineXAxis: "{t = y = 0}",
}


@dataclass(frozen=True, eq=False)
class KernelDescriptor:
    kind: KernelKind
    functionals: np.ndarray          # rows L with K = {g : L @ g = 0}
    c: Optional[float] = None        # PlaneTilted: t = c x
    source: Optional[HomSpec] = None
    provenance: str = ""

    @classmethod
    def of_kind(cls, kind: KernelKind, c: Optional[float] = None, source=None,
                provenance: str = "") -> "KernelDescriptor":
        rows = {
            KernelKind.FullGroup: np.zeros((0, 3)),
            KernelKind.PlaneT0: np.array([[1.0, 0.0, 0.0]]),
            KernelKind.PlaneX0: np.array([[0.0, 1.0, 0.0]]),
            KernelKind.LineYAxis: np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
            KernelKind.LineXAxis: np.array([[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]),
        }
        if kind is KernelKind.PlaneTilted:
            return cls(kind, np.array([[1.0, -c, 0.0]]), float(c), source, provenance)
        return cls(kind, rows[kind], None, source, provenance)

    @classmethod
    def linear(cls, functionals) -> "KernelDescriptor":
        return cls(KernelKind.Linear, np.asarray(functionals, dtype=float).reshape(-1, 3))

    @property
    def forces_t_zero(self) -> bool:
        """True when every element of K has t = 0."""
        if not self.functionals.size:
            return False
        # (1, 0, 0) lies in the row space
        e1 = np.array([1.0, 0.0, 0.0])
        coef, *_ = np.linalg.lstsq(self.functionals.T, e1, rcond=None)
        return bool(np.linalg.norm(self.functionals.T @ coef - e1) < 1e-12)

    @property
    def dimension(self) -> int:
        if not self.functionals.size:
            return 3
        return 3 - int(np.linalg.matrix_rank(self.functionals, tol=1e-12))

    def residual(self, g) -> np.ndarray:
        g = np.asarray(g, dtype=float)
        if not self.functionals.size:
            return np.zeros(g.shape[:-1])
        return np.max(np.abs(np.einsum("kj,...j->...k", self.functionals, g)), axis=-1)

    def contains(self, g, tol: float = _ZERO_TOL) -> bool:
        return bool(self.residual(g) <= tol)

    def sample(self, rng: np.random.Generator, n: int, scale: float = 2.0) -> np.ndarray:
        if not self.functionals.size:
            return rng.uniform(-scale, scale, (n, 3))
        _, sv, vt = np.linalg.svd(self.functionals)
        rank = int(np.sum(sv > 1e-12))
        basis = vt[rank:]
        return rng.uniform(-scale, scale, (n, basis.shape[0])) @ basis

    def describe(self) -> str:
        if self.kind is KernelKind.PlaneTilted:
            return f"{{t = {self.c:.12g} x}}"
        if self.kind is KernelKind.Linear:
            eqs = ["{:+.6g} t {:+.6g} x {:+.6g} y = 0".format(*row) for row in self.functionals]
            return "{" + "; ".join(eqs) + "}"
        return _KERNEL_TEXT[self.kind]

    def same_set(self, other: "KernelDescriptor") -> bool:
        a, b = self.functionals, other.functionals
        ra = np.linalg.matrix_rank(a, tol=1e-12) if a.size else 0
        rb = np.linalg.matrix_rank(b, tol=1e-12) if b.size else 0
        if ra != rb:
            return False
        if ra == 0:
            return True
        return np.linalg.matrix_rank(np.vstack([a, b]), tol=1e-12) == ra

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "set": self.describe(),
             "functionals": self.functionals.tolist()}
        if self.c is not None:
            d["c"] = self.c
        if self.provenance:
            d["provenance"] = self.provenance
        return d


def _nz(x: float) -> bool:
    return abs(x) > _ZERO_TOL


def _row_kernel(a1: float, a2: float, source, provenance="") -> KernelDescriptor:
    """Kernel of (t, x) -> a1 t + a2 x."""
    if not _nz(a1) and not _nz(a2):
        kind, c = KernelKind.FullGroup, None
    elif not _nz(a2):
        kind, c = KernelKind.PlaneT0, None
    elif not _nz(a1):
        kind, c = KernelKind.PlaneX0, None
    else:
        kind, c = KernelKind.PlaneTilted, -a2 / a1
    return KernelDescriptor.of_kind(kind, c, source, provenance)


def kernel_of(cls: GroupClass, h: HomSpec) -> KernelDescriptor:
    if h.cls != cls:
        raise NonCanonicalHom(f"homomorphism is defined on {h.cls.label}, not {cls.label}")
    if not h.is_canonical:
        raise NonCanonicalHom(f"coefficients violate {h.family.formula()}")
    c = h.coeffs
    rule = h.family.rule
    if rule == "matrix":
        b = np.array([[c["alpha1"], c["alpha2"]], [c["beta1"], c["beta2"]]])
        det = float(np.linalg.det(b))
        if abs(det) > _ZERO_TOL * max(1.0, float(np.sum(b * b))):
            return KernelDescriptor.of_kind(KernelKind.LineYAxis, source=h,
                                            provenance=f"det B = {det:.12g}")
        # det B = 0: both rows are proportional, any nonzero one carries the kernel
        row = b[0] if np.any(np.abs(b[0]) > _ZERO_TOL) else b[1]
        return _row_kernel(row[0], row[1], h, provenance=f"det B = 0, B = {b.tolist()}")
    if rule == "row":
        return _row_kernel(c["alpha1"], c["alpha2"], h)
    if rule == "beta3":
        kind = KernelKind.LineXAxis if _nz(c["beta3"]) else KernelKind.PlaneT0
        return KernelDescriptor.of_kind(kind, source=h)
    if rule == "beta2":
        kind = KernelKind.LineYAxis if _nz(c["beta2"]) else KernelKind.PlaneT0
        return KernelDescriptor.of_kind(kind, source=h)
    if rule == "time":
        nonzero = any(_nz(c.get(n, 0.0)) for n in ("alpha1", "beta1"))
        kind = KernelKind.PlaneT0 if nonzero else KernelKind.FullGroup
        return KernelDescriptor.of_kind(kind, source=h)
    return KernelDescriptor.of_kind(KernelKind.FullGroup, source=h)
