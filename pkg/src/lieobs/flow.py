"""Linear vector fields X = (D*, xi) on R x_rho R^2 and their flows.

The flow is  phi_s(t, v) = (t, exp(s D*) v + F_s Lambda_t xi)  with
F_s = sum_{j>=1} s^j (D*)^(j-1) / j!.  Its generator is
X(t, v) = (0, D* v + Lambda_t xi).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import linalg
from .groups import GroupClass, lambda_of, multiply, theta
from .sets import SetDescriptor, solve_fibred
from .tolerances import DEFAULT, Tolerances


class SingularConjugator(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FieldSpec:
    dstar: np.ndarray
    xi: np.ndarray

    def __post_init__(self):
        d = np.array(self.dstar, dtype=float).reshape(2, 2)
        x = np.array(self.xi, dtype=float).reshape(2)
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(x))):
            raise ValueError("field entries must be finite")
        d.setflags(write=False)
        x.setflags(write=False)
        object.__setattr__(self, "dstar", d)
        object.__setattr__(self, "xi", x)

    def to_dict(self) -> dict:
        return {"dstar": self.dstar.tolist(), "xi": self.xi.tolist()}


class DstarKind(str, enum.Enum):
    RealDiagonalizable = "RealDiagonalizable"
    JordanBlock = "JordanBlock"
    ComplexPair = "ComplexPair"


@dataclass(frozen=True, eq=False)
class DstarClass:
    kind: DstarKind
    params: tuple            # (lambda, mu) | (lambda,) | (a, b)
    conjugator: np.ndarray   # P with P @ canonical @ inv(P) == D*

    @property
    def canonical(self) -> np.ndarray:
        if self.kind is DstarKind.RealDiagonalizable:
            return np.diag(self.params)
        if self.kind is DstarKind.JordanBlock:
            (lam,) = self.params
            return np.array([[lam, 1.0], [0.0, lam]])
        a, b = self.params
        return np.array([[a, -b], [b, a]])

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "params": [float(p) for p in self.params],
                "conjugator": self.conjugator.tolist()}


@dataclass(frozen=True, eq=False)
class ConjugationSpec:
    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", np.array(self.p, dtype=float).reshape(2, 2))


def exp_dstar(field: FieldSpec, s, tol: Tolerances = DEFAULT) -> np.ndarray:
    return linalg.expm2(field.dstar, s, tol.expm_boundary)


def f_of(field: FieldSpec, s) -> np.ndarray:
    """F_s via the top-right block of exp([[s D*, s I], [0, 0]])."""
    return linalg.phi1_block(field.dstar, s)


def flow(cls: GroupClass, field: FieldSpec, s, g, tol: Tolerances = DEFAULT) -> np.ndarray:
    """phi_s(g).  ``s`` may be an array (result ``(len(s), 3)``); ``g`` may be a stack
    of points when ``s`` is scalar."""
    g = np.asarray(g, dtype=float)
    s_arr = np.asarray(s, dtype=float)
    e = exp_dstar(field, s_arr, tol)
    f = f_of(field, s_arr)
    lam_xi = np.einsum("...ij,j->...i", lambda_of(cls, g[..., 0]), field.xi)
    if s_arr.ndim == 0:
        v = np.einsum("ij,...j->...i", e, g[..., 1:]) + np.einsum("ij,...j->...i", f, lam_xi)
        return np.concatenate([g[..., :1], v], axis=-1)
    v = e @ g[1:] + f @ lam_xi
    return np.concatenate([np.full((s_arr.size, 1), g[0]), v], axis=-1)


def flow_many(cls: GroupClass, field: FieldSpec, s_grid, points, tol: Tolerances = DEFAULT):
    """phi_s(p) for every s in ``s_grid`` and every row of ``points``: shape (n_s, n_p, 3)."""
    s_grid = np.atleast_1d(np.asarray(s_grid, dtype=float))
    points = np.asarray(points, dtype=float).reshape(-1, 3)
    e = exp_dstar(field, s_grid, tol)
    f = f_of(field, s_grid)
    lam_xi = np.einsum("pij,j->pi", lambda_of(cls, points[:, 0]), field.xi)
    v = (e @ points[:, 1:].T + f @ lam_xi.T).transpose(0, 2, 1)
    t = np.broadcast_to(points[:, 0], (s_grid.size, points.shape[0]))[..., None]
    return np.concatenate([t, v], axis=-1)


def vector_field_eval(cls: GroupClass, field: FieldSpec, g) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    lam_xi = np.einsum("...ij,j->...i", lambda_of(cls, g[..., 0]), field.xi)
    v = np.einsum("ij,...j->...i", field.dstar, g[..., 1:]) + lam_xi
    return np.concatenate([np.zeros_like(g[..., :1]), v], axis=-1)


def zeros_of_field(cls: GroupClass, field: FieldSpec, t_window=(-10.0, 10.0),
                   tol: Tolerances = DEFAULT) -> SetDescriptor:
    """Fix(phi) = {(t, v) : D* v + Lambda_t xi = 0}.

    Invertible D* gives the curve v(t) = -(D*)^-1 Lambda_t xi.  For singular
    D* the fibre over t is empty, a line or the plane, and the admissible t
    are the zeros of the component of Lambda_t xi outside the range of D*.
    Only zeros inside ``t_window`` are listed.
    """
    rhs = np.hstack([np.zeros((2, 1)), -np.eye(2)])
    return solve_fibred(cls, field.xi, field.dstar, rhs, window=tuple(t_window), tol=tol,
                        label="Fix", clip=True)


@dataclass(frozen=True)
class CompatibilityReport:
    compatible: bool
    commutator_norm: float
    automorphism_residual: float

    def to_dict(self) -> dict:
        return {"compatible": self.compatible, "commutator_norm": self.commutator_norm,
                "automorphism_residual": self.automorphism_residual}


def is_derivation_compatible(cls: GroupClass, field: FieldSpec, samples: int = 200,
                             seed: int = 0, tol: Tolerances = DEFAULT) -> CompatibilityReport:
    """Commutator test D* theta = theta D*, plus a sampled check that phi_s is an automorphism.

    The automorphism residual is relative: |phi_s(gh) - phi_s(g)phi_s(h)| / (1 + |phi_s(gh)|).
    """
    th = theta(cls)
    comm = float(np.linalg.norm(field.dstar @ th - th @ field.dstar))
    rng = np.random.default_rng(seed)
    g = rng.uniform(-1, 1, (samples, 3))
    h = rng.uniform(-1, 1, (samples, 3))
    s = rng.uniform(-1, 1, samples)
    worst = 0.0
    for gi, hi, si in zip(g, h, s):
        lhs = flow(cls, field, si, multiply(cls, gi, hi), tol)
        rhs = multiply(cls, flow(cls, field, si, gi, tol), flow(cls, field, si, hi, tol))
        worst = max(worst, float(np.linalg.norm(lhs - rhs) / (1.0 + np.linalg.norm(lhs))))
    return CompatibilityReport(comm < tol.commutator, comm, worst)


def _null_vector(m: np.ndarray) -> np.ndarray:
    """Kernel vector of a singular 2x2 matrix, read off its larger row.

    More robust than a general eigensolver when entries differ by hundreds of
    orders of magnitude."""
    row = m[int(np.argmax(np.abs(m).sum(axis=1)))]
    v = np.array([-row[1], row[0]])
    return v / np.linalg.norm(v)


def classify_dstar(field: FieldSpec, tol: Tolerances = DEFAULT) -> DstarClass:
    """Real canonical form of D*: diag(l, m), Jordan block, or [[a, -b], [b, a]] with b > 0."""
    d = field.dstar
    disc = linalg.discriminant(d)
    bound = linalg.boundary_tol(d, tol.dstar_boundary)
    m = 0.5 * np.trace(d)
    if disc > bound:
        r = 0.5 * np.sqrt(disc)
        w = (m + r, m - r)
        vecs = np.column_stack([_null_vector(d - mu * np.eye(2)) for mu in w])
        return DstarClass(DstarKind.RealDiagonalizable, (float(w[0]), float(w[1])), vecs)
    if disc < -bound:
        b = 0.5 * np.sqrt(-disc)
        vec = _null_vector(d - (m + 1j * b) * np.eye(2))
        p = np.column_stack([vec.imag, vec.real])
        return DstarClass(DstarKind.ComplexPair, (float(m), float(b)), p)
    nil = d - m * np.eye(2)
    if np.linalg.norm(nil) <= np.sqrt(bound):
        return DstarClass(DstarKind.RealDiagonalizable, (float(m), float(m)), np.eye(2))
    u = np.eye(2)[int(np.argmax(np.linalg.norm(nil, axis=0)))]
    p = np.column_stack([nil @ u, u])
    return DstarClass(DstarKind.JordanBlock, (float(m),), p)


def conjugate_field(field: FieldSpec, conj: ConjugationSpec,
                    tol: Tolerances = DEFAULT) -> FieldSpec:
    """(P D* P^-1, P xi): the field whose flow is intertwined by pi(t, v) = (t, P v)."""
    p = conj.p
    if abs(np.linalg.det(p)) <= tol.conjugator_det:
        raise SingularConjugator(f"|det P| = {abs(np.linalg.det(p)):.3g}")
    return FieldSpec(p @ field.dstar @ np.linalg.inv(p), p @ field.xi)
