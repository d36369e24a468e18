"""Reference classifications with hand-entered expected verdicts.

Expected statuses come from the published case analysis for each kernel kind
and drift type; they are never produced by running the classifier.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from .flow import FieldSpec
from .groups import E, R2, R3, GroupClass, r3_lambda, r3_prime_lambda
from .subgroups import HomSpec, make_hom

OBS = "Observable"
LOCAL = "LocallyObservableOnly"
NLO = "NotLocallyObservable"

DIAGONAL = [np.diag([1.0, 2.0]), np.diag([-1.0, 0.5]), np.diag([0.0, 3.0])]
SCALAR = [0.7 * np.eye(2), np.zeros((2, 2))]         # complex pair with b = 0
JORDAN = [np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([[1.0, 1.0], [0.0, 1.0]]),
          np.array([[-0.5, 1.0], [0.0, -0.5]])]
COMPLEX = [np.array([[0.0, -1.0], [1.0, 0.0]]), np.array([[0.3, -2.0], [2.0, 0.3]]),
           np.array([[-0.4, -0.7], [0.7, -0.4]])]
ANY = DIAGONAL + SCALAR + JORDAN + COMPLEX
XIS = [np.array([1.0, 1.0]), np.zeros(2), np.array([0.5, -1.0])]


@dataclass(frozen=True, eq=False)
class GoldenCase:
    name: str
    cls: GroupClass
    field: FieldSpec
    hom: HomSpec
    expected: str
    i_discrete: bool

    def to_dict(self) -> dict:
        return {"name": self.name, "group": self.cls.to_dict(), "field": self.field.to_dict(),
                "hom": self.hom.to_dict(), "expected": self.expected}


def _cases(out: List[GoldenCase], tag: str, cls: GroupClass, target: str,
           coeffs: Dict[str, float], dstars, expected: str, family: Optional[str] = None,
           xis=XIS) -> None:
    h = make_hom(cls, target, coeffs, family)
    for i, d in enumerate(dstars):
        for j, xi in enumerate(xis):
            out.append(GoldenCase(f"{cls.label}/{target}/{tag}/D{i}/xi{j}", cls,
                                  FieldSpec(d, xi), h, expected, expected != NLO))


def _line_kernel_cases(out, cls, target, coeffs, family=None, complex_ok=True, jordan_ok=True):
    _cases(out, "diag", cls, target, coeffs, DIAGONAL + SCALAR, NLO, family)
    _cases(out, "jordan", cls, target, coeffs, JORDAN, OBS if jordan_ok else NLO, family)
    _cases(out, "complex", cls, target, coeffs, COMPLEX, OBS if complex_ok else NLO, family)


def golden_cases() -> List[GoldenCase]:
    out: List[GoldenCase] = []

    # R2 -> G1, invertible B: kernel {t = x = 0}
    for b in ({"alpha1": 1, "beta2": 1}, {"alpha1": 2, "alpha2": 1, "beta1": 1, "beta2": 3}):
        _line_kernel_cases(out, R2, "G1", b)
    # R2 -> G1, singular B: K = G, {t = 0}, tilted plane t = c x
    _cases(out, "zero", R2, "G1", {}, ANY, NLO)
    _cases(out, "t0", R2, "G1", {"alpha1": 1, "beta1": 2}, ANY, NLO)
    _cases(out, "tilted", R2, "G1", {"alpha1": 1, "alpha2": 2, "beta1": 2, "beta2": 4},
           DIAGONAL + SCALAR, NLO)
    # R2 kernel {x = 0}
    x0 = {"alpha2": 1, "beta2": 2}
    _cases(out, "x0-diag0", R2, "G1", x0, [np.diag([0.0, 1.5]), np.diag([0.0, -2.0])], NLO)
    _cases(out, "x0-nilpotent", R2, "G1", x0, [JORDAN[0]], OBS,
           xis=[np.array([1.0, 1.0]), np.array([0.0, 1.0]), np.array([2.0, -1.0])])

    # R2 -> G2: kernel {t = y = 0}, or {t = 0} when beta3 = 0
    _line_kernel_cases(out, R2, "G2", {"beta3": 2}, jordan_ok=False)
    _cases(out, "beta3=0", R2, "G2", {"beta3": 0}, ANY, NLO)
    _cases(out, "zero", R2, "G2", {}, ANY, NLO, family="zero")

    # R2 -> G3 behaves like G1
    _line_kernel_cases(out, R2, "G3", {"alpha1": 1, "alpha2": -1, "beta1": 2, "beta2": 1})
    _cases(out, "case1", R2, "G3", {}, ANY, NLO)
    _cases(out, "case2", R2, "G3", {"alpha1": 3, "beta1": -1}, ANY, NLO)
    _cases(out, "case4", R2, "G3", {"alpha1": 1, "alpha2": -0.5, "beta1": -2, "beta2": 1},
           DIAGONAL + SCALAR, NLO)
    # one-dimensional targets reuse the same subcases
    for target in ("G4", "G5", "G6"):
        _cases(out, "zero", R2, target, {}, ANY, NLO)
        _cases(out, "t0", R2, target, {"alpha1": 1.5}, ANY, NLO)
        _cases(out, "tilted", R2, target, {"alpha1": -1, "alpha2": 2}, DIAGONAL + SCALAR, NLO)

    # R3
    _line_kernel_cases(out, R3, "G1", {"beta3": -1.5}, jordan_ok=False)
    _cases(out, "beta3=0", R3, "G1", {"beta3": 0}, ANY, NLO)
    _cases(out, "zero", R3, "G1", {}, ANY, NLO, family="zero")
    _cases(out, "t0", R3, "G2", {"alpha1": 1, "beta1": -2}, ANY, NLO)
    _cases(out, "full", R3, "G2", {}, ANY, NLO)
    for target in ("G3", "G4", "G5"):
        _cases(out, "t0", R3, target, {"alpha1": 2}, ANY, NLO)
        _cases(out, "full", R3, target, {}, ANY, NLO)

    # R3Lambda
    for lam in (0.25, 0.5, 1.0):
        cls = r3_lambda(lam)
        _cases(out, "t0", cls, "G1", {"alpha1": 1, "beta1": 1}, ANY, NLO)
        _cases(out, "full", cls, "G1", {}, ANY, NLO)
        for target in ("G2", "G3"):
            _line_kernel_cases(out, cls, target, {"beta2": 0.5})
            _cases(out, "beta2=0", cls, target, {"beta2": 0}, ANY, NLO)
            _cases(out, "zero", cls, target, {}, ANY, NLO, family="zero")
        for target in ("G4", "G5", "G6"):
            _cases(out, "t0", cls, target, {"alpha1": -1}, ANY, NLO)
            _cases(out, "full", cls, target, {}, ANY, NLO)

    # R3PrimeLambda and E
    for cls in (r3_prime_lambda(0.5), r3_prime_lambda(-0.5), E):
        _cases(out, "t0", cls, "G1", {"alpha1": 1, "beta1": 0.5}, ANY, NLO)
        _cases(out, "full", cls, "G1", {}, ANY, NLO)
        _cases(out, "t0", cls, "G2", {"alpha1": 2}, ANY, NLO)
        _cases(out, "full", cls, "G2", {}, ANY, NLO)
    return out
