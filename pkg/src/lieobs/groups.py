"""The five simply connected solvable non-nilpotent 3D groups as R x_rho R^2.

Group elements are numpy arrays ``(t, x, y)``; every function also accepts
stacks of shape ``(..., 3)``.  The product is ``(t, v)(s, w) = (t+s, v + rho_t w)``
with ``rho_t = exp(t theta)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import rotation


class GroupKind(str, enum.Enum):
    R2 = "R2"
    R3 = "R3"
    R3Lambda = "R3Lambda"
    R3PrimeLambda = "R3PrimeLambda"
    E = "E"


@dataclass(frozen=True)
class GroupClass:
    kind: GroupKind
    lam: Optional[float] = None

    def __post_init__(self):
        kind = GroupKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if kind is GroupKind.R3Lambda:
            if self.lam is None or not 0.0 < abs(self.lam) <= 1.0:
                raise ValueError(f"R3Lambda needs 0 < |lambda| <= 1, got {self.lam!r}")
        elif kind is GroupKind.R3PrimeLambda:
            if self.lam is None or self.lam == 0.0:
                raise ValueError(f"R3PrimeLambda needs lambda != 0, got {self.lam!r}")
        elif self.lam is not None:
            raise ValueError(f"{kind.value} takes no parameter")
        if self.lam is not None:
            object.__setattr__(self, "lam", float(self.lam))

    @classmethod
    def parse(cls, kind: str, lam: Optional[float] = None) -> "GroupClass":
        return cls(GroupKind(kind), lam)

    @property
    def label(self) -> str:
        if self.lam is None:
            return self.kind.value
        return f"{self.kind.value}({self.lam:g})"

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "lambda": self.lam}


R2 = GroupClass(GroupKind.R2)
R3 = GroupClass(GroupKind.R3)
E = GroupClass(GroupKind.E)


def r3_lambda(lam: float) -> GroupClass:
    return GroupClass(GroupKind.R3Lambda, lam)


def r3_prime_lambda(lam: float) -> GroupClass:
    return GroupClass(GroupKind.R3PrimeLambda, lam)


IDENTITY = np.zeros(3)


def element(t: float, x: float, y: float) -> np.ndarray:
    return np.array([t, x, y], dtype=float)


def theta(cls: GroupClass) -> np.ndarray:
    """Defining matrix of the R^2 action."""
    k = cls.kind
    if k is GroupKind.R2:
        return np.array([[0.0, 0.0], [0.0, 1.0]])
    if k is GroupKind.R3:
        return np.array([[1.0, 1.0], [0.0, 1.0]])
    if k is GroupKind.R3Lambda:
        return np.array([[1.0, 0.0], [0.0, cls.lam]])
    if k is GroupKind.R3PrimeLambda:
        return np.array([[cls.lam, -1.0], [1.0, cls.lam]])
    return np.array([[0.0, -1.0], [1.0, 0.0]])


def rho(cls: GroupClass, t) -> np.ndarray:
    """exp(t theta) in closed form; ``t`` may be an array (result ``(..., 2, 2)``)."""
    t = np.asarray(t, dtype=float)
    one, zero = np.ones_like(t), np.zeros_like(t)
    k = cls.kind
    if k is GroupKind.R2:
        out = [[one, zero], [zero, np.exp(t)]]
    elif k is GroupKind.R3:
        et = np.exp(t)
        out = [[et, t * et], [zero, et]]
    elif k is GroupKind.R3Lambda:
        out = [[np.exp(t), zero], [zero, np.exp(cls.lam * t)]]
    elif k is GroupKind.R3PrimeLambda:
        return np.exp(cls.lam * t)[..., None, None] * rotation(t)
    else:
        return rotation(t)
    return np.stack([np.stack(row, -1) for row in out], -2)


def multiply(cls: GroupClass, g, h) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    h = np.asarray(h, dtype=float)
    r = rho(cls, g[..., 0])
    v = g[..., 1:] + np.einsum("...ij,...j->...i", r, h[..., 1:])
    return np.concatenate([(g[..., 0] + h[..., 0])[..., None], v], axis=-1)


def inverse(cls: GroupClass, g) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    r = rho(cls, -g[..., 0])
    v = -np.einsum("...ij,...j->...i", r, g[..., 1:])
    return np.concatenate([-g[..., :1], v], axis=-1)


def lambda_of(cls: GroupClass, t) -> np.ndarray:
    """Lambda_t = integral_0^t rho_s ds in closed form (vectorized over ``t``)."""
    t = np.asarray(t, dtype=float)
    zero = np.zeros_like(t)
    k = cls.kind
    if k is GroupKind.R2:
        out = [[t, zero], [zero, np.expm1(t)]]
    elif k is GroupKind.R3:
        em = np.expm1(t)
        out = [[em, t * np.exp(t) - em], [zero, em]]
    elif k is GroupKind.R3Lambda:
        out = [[np.expm1(t), zero], [zero, np.expm1(cls.lam * t) / cls.lam]]
    else:
        lam = cls.lam if k is GroupKind.R3PrimeLambda else 0.0
        z = np.expm1((lam + 1j) * t) / (lam + 1j)
        out = [[z.real, -z.imag], [z.imag, z.real]]
    return np.stack([np.stack(row, -1) for row in out], -2)


def lambda_basis(cls: GroupClass) -> dict:
    """Lambda_t written as sum_k phi_k(t) C_k.

    Keys are ``(rate, power, trig)`` for phi_k(t) = t^power e^(rate t) {1, cos t, sin t};
    values are the constant 2x2 matrices C_k.
    """
    e11 = np.array([[1.0, 0.0], [0.0, 0.0]])
    e22 = np.array([[0.0, 0.0], [0.0, 1.0]])
    e12 = np.array([[0.0, 1.0], [0.0, 0.0]])
    eye = np.eye(2)
    jay = np.array([[0.0, -1.0], [1.0, 0.0]])
    k = cls.kind
    if k is GroupKind.R2:
        parts = [((0.0, 1, ""), e11), ((1.0, 0, ""), e22), ((0.0, 0, ""), -e22)]
    elif k is GroupKind.R3:
        parts = [((1.0, 0, ""), eye - e12), ((1.0, 1, ""), e12), ((0.0, 0, ""), e12 - eye)]
    elif k is GroupKind.R3Lambda:
        lam = cls.lam
        parts = [((1.0, 0, ""), e11), ((lam, 0, ""), e22 / lam),
                 ((0.0, 0, ""), -e11 - e22 / lam)]
    else:
        lam = cls.lam if k is GroupKind.R3PrimeLambda else 0.0
        d = 1.0 + lam * lam
        parts = [((lam, 0, "cos"), (lam * eye - jay) / d), ((lam, 0, "sin"), (eye + lam * jay) / d),
                 ((0.0, 0, ""), (jay - lam * eye) / d)]
    out: dict = {}
    for key, mat in parts:
        out[key] = out.get(key, 0.0) + mat
    return out
