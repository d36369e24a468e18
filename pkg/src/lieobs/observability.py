"""Indistinguishability subgroup, fixed points inside the kernel, and the verdict.

For a kernel K = {L g = 0} with L = (L_t | L_v), the flow keeps t fixed, so
L(phi_s(t, v)) = L_t t + L_v (e^{sD*} v + F_s Lambda_t xi) is analytic in s.
It vanishes identically iff its value and all s-derivatives vanish at s = 0,
and by Cayley-Hamilton only the first two derivatives matter:

    L_t t + L_v v = 0,   L_v w = 0,   L_v D* w = 0,   w = D* v + Lambda_t xi.

That is a fibred affine system in v (see ``sets.solve_fibred``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from . import linalg
from .flow import (ConjugationSpec, DstarKind, FieldSpec, classify_dstar, conjugate_field,
                   f_of, exp_dstar, flow_many)
from .groups import GroupClass, lambda_of, theta
from .sets import SetDescriptor, SetKind, WindowLimited, numeric_set, solve_fibred
from .subgroups import HomSpec, KernelDescriptor, KernelKind, kernel_of
from .tolerances import DEFAULT, Tolerances


class Status(str, enum.Enum):
    Observable = "Observable"
    LocallyObservableOnly = "LocallyObservableOnly"
    NotLocallyObservable = "NotLocallyObservable"


class Provenance(str, enum.Enum):
    Analytic = "Analytic"
    NumericOnly = "NumericOnly"


@dataclass(frozen=True, eq=False)
class Verdict:
    status: Status
    i_set: SetDescriptor
    fix_cap_k: Optional[SetDescriptor]
    provenance: Provenance
    kernel: KernelDescriptor
    notes: Tuple[str, ...] = ()
    pattern: str = ""

    def to_dict(self) -> dict:
        return {"status": self.status.value, "provenance": self.provenance.value,
                "kernel": self.kernel.to_dict(), "i_set": self.i_set.to_dict(),
                "fix_cap_k": None if self.fix_cap_k is None else self.fix_cap_k.to_dict(),
                "pattern": self.pattern, "notes": list(self.notes)}


def _split(k: KernelDescriptor) -> Tuple[np.ndarray, np.ndarray]:
    return k.functionals[:, 0], k.functionals[:, 1:]


def _at_t_zero(rows: np.ndarray, label: str, tol: Tolerances) -> SetDescriptor:
    """{(0, v) : rows @ v = 0}: what every fibred system becomes once K forces t = 0."""
    rows = np.asarray(rows, dtype=float).reshape(-1, 2)
    if rows.shape[0]:
        _, sv, vt = np.linalg.svd(rows)
        rank = int(np.sum(sv > tol.rank * max(1.0, sv[0])))
        directions = vt[rank:].T
    else:
        directions = np.eye(2)
    dim = directions.shape[1]
    kind = {0: SetKind.Trivial, 1: SetKind.Line, 2: SetKind.Plane}[dim]
    desc = "identity only" if dim == 0 else f"{dim}-dim subspace of the slice t = 0"
    return SetDescriptor(kind, (0.0,), directions, lambda t: np.zeros(2), np.zeros((1, 3)),
                         False, None, f"{label}: {desc}", tol.identity_cluster)


def indistinguishable_set(cls: GroupClass, fld: FieldSpec, k: KernelDescriptor,
                          t_window=(-10.0, 10.0), tol: Tolerances = DEFAULT) -> SetDescriptor:
    d = fld.dstar
    lt, lv = _split(k)
    rows, rhs = [], []
    for a, row in zip(lt, lv):
        rows += [row, row @ d, row @ d @ d]
        rhs += [[-a, 0.0, 0.0], [0.0, *(-row)], [0.0, *(-(row @ d))]]
    if k.forces_t_zero:
        return _at_t_zero(np.array(rows), "I", tol)
    return solve_fibred(cls, fld.xi, np.array(rows).reshape(-1, 2), np.array(rhs).reshape(-1, 3),
                        window=tuple(t_window), tol=tol, label="I")


def fixed_set_intersect_kernel(cls: GroupClass, fld: FieldSpec, k: KernelDescriptor,
                               t_window=(-10.0, 10.0), tol: Tolerances = DEFAULT) -> SetDescriptor:
    """Fix(phi) cap K = {(t, v) : D* v + Lambda_t xi = 0, L_t t + L_v v = 0}."""
    lt, lv = _split(k)
    rows = np.vstack([fld.dstar, lv])
    if k.forces_t_zero:
        return _at_t_zero(rows, "Fix cap K", tol)
    rhs = np.vstack([np.hstack([np.zeros((2, 1)), -np.eye(2)]),
                     np.column_stack([-lt, np.zeros((len(lt), 2))])])
    return solve_fibred(cls, fld.xi, rows, rhs, window=tuple(t_window), tol=tol,
                        label="Fix cap K")


def default_s_grid(span: float = 5.0, step: float = 0.01) -> np.ndarray:
    n = int(round(2 * span / step))
    return np.linspace(-span, span, n + 1)


def indistinguishable_numeric(cls: GroupClass, fld: FieldSpec, k: KernelDescriptor,
                              s_grid=None, seed_grid=None, tol: Tolerances = DEFAULT,
                              seed: int = 0) -> SetDescriptor:
    """Sampling oracle for I, independent of the derivative reduction.

    For every seed time t, the v making L(phi_s(t, v)) small on the whole s grid is
    found by least squares; candidates (plus offsets along any unresolved
    direction) are kept when the flow stays within ``flow_membership`` of K,
    measured relative to 1 + |phi_s(g)|.
    """
    s_grid = default_s_grid() if s_grid is None else np.asarray(s_grid, dtype=float)
    seed_grid = np.linspace(-2.0, 2.0, 81) if seed_grid is None else np.asarray(seed_grid, float)
    if not s_grid.size or not seed_grid.size:
        raise ValueError("grids must be nonempty")
    rng = np.random.default_rng(seed)

    if not k.functionals.size:
        v = rng.uniform(-1, 1, (seed_grid.size, 2))
        pts = np.column_stack([seed_grid, v])
        return numeric_set(pts, description="I (sampled): every candidate retained")

    # orthonormal functionals: |q @ g| is the Euclidean distance from g to K
    q = np.linalg.qr(k.functionals.T)[0].T
    qt, qv = q[:, 0], q[:, 1:]

    e = exp_dstar(fld, s_grid, tol)                      # (n_s, 2, 2)
    f = f_of(fld, s_grid)
    a = (qv @ e).reshape(-1, 2)                          # rows qv e^{sD}
    scale = np.linalg.norm(a, axis=1)
    live = scale > 1e-14 * max(1.0, scale.max(initial=0.0))

    lam_xi = np.einsum("pij,j->pi", lambda_of(cls, seed_grid), fld.xi)  # (n_t, 2)
    # b[t] = -(qt t + qv F_s Lambda_t xi)
    b = -(qt[None, None, :] * seed_grid[:, None, None]
          + (qv @ f @ lam_xi.T).transpose(2, 0, 1)).reshape(seed_grid.size, -1)

    candidates = []
    if np.any(live):
        an = a[live] / scale[live, None]
        u, sv, vt = np.linalg.svd(an, full_matrices=False)
        rank = int(np.sum(sv > tol.rank * sv[0]))
        pinv = vt[:rank].T @ np.diag(1.0 / sv[:rank]) @ u[:, :rank].T
        vstar = (b[:, live] / scale[live]) @ pinv.T
        null = vt[rank:]
    else:
        vstar = np.zeros((seed_grid.size, 2))
        null = np.eye(2)
    for t, v in zip(seed_grid, vstar):
        candidates.append([t, *v])
        for n in null:
            candidates.append([t, *(v + n)])
            candidates.append([t, *(v - n)])
    candidates = np.array(candidates)

    traj = flow_many(cls, fld, s_grid, candidates, tol)          # (n_s, n_c, 3)
    dist = np.abs(traj @ q.T).max(axis=-1)
    rel = dist / (1.0 + np.sqrt(np.einsum("sci,sci->sc", traj, traj)))
    keep = rel.max(axis=0) < tol.flow_membership
    pts = candidates[keep]
    desc = f"I (sampled): {len(pts)} of {len(candidates)} candidates retained"
    return numeric_set(pts, description=desc, cluster_radius=tol.identity_cluster)


def _pattern(k: KernelDescriptor, fld: FieldSpec, status: Status, tol: Tolerances) -> Tuple[str, tuple]:
    dk = classify_dstar(fld, tol)
    drift = {DstarKind.RealDiagonalizable: "real diagonalizable D*",
             DstarKind.JordanBlock: "Jordan block D*",
             DstarKind.ComplexPair: "complex-pair D*"}[dk.kind]
    notes = ()
    kind = k.kind
    if kind is KernelKind.FullGroup:
        return "constant output (K = G)", notes
    if kind is KernelKind.PlaneT0:
        return "time-slice kernel {t = 0}", notes
    if kind in (KernelKind.LineYAxis, KernelKind.LineXAxis):
        return f"line kernel {k.describe()} with {drift}", notes
    if kind is KernelKind.PlaneTilted:
        return f"tilted plane kernel with {drift}", notes
    if kind is KernelKind.PlaneX0:
        if status is not Status.NotLocallyObservable:
            notes = ("open case: global observability for the kernel {x = 0} "
                     "decided here by computation",)
        return f"plane kernel {{x = 0}} with {drift}", notes
    return f"general linear kernel with {drift}", notes


def classify_kernel(cls: GroupClass, fld: FieldSpec, k: KernelDescriptor, t_window=(-10.0, 10.0),
                    tol: Tolerances = DEFAULT, strict: bool = False) -> Verdict:
    i_set = indistinguishable_set(cls, fld, k, t_window, tol)
    notes = []
    if i_set.window_limited:
        # discreteness of I never depends on the window, only the listed t values do
        notes.append("I: t values listed only inside the search window")
    if not i_set.is_discrete:
        status, fix, prov = Status.NotLocallyObservable, None, Provenance.Analytic
    else:
        fix = fixed_set_intersect_kernel(cls, fld, k, t_window, tol)
        status = Status.Observable if fix.kind is SetKind.Trivial else Status.LocallyObservableOnly
        prov = Provenance.NumericOnly if fix.window_limited else Provenance.Analytic
        if fix.window_limited:
            msg = f"Fix cap K: zeros in t searched only on {fix.window}"
            if strict:
                raise WindowLimited(msg)
            notes.append(msg)
    pattern, extra = _pattern(k, fld, status, tol)
    return Verdict(status, i_set, fix, prov, k, tuple(notes) + extra, pattern)


def classify_pair(cls: GroupClass, fld: FieldSpec, h: HomSpec, t_window=(-10.0, 10.0),
                  tol: Tolerances = DEFAULT, strict: bool = False) -> Verdict:
    return classify_kernel(cls, fld, kernel_of(cls, h), t_window, tol, strict)


# ------------------------------------------------------------------ conjugation

def centralizer_basis(cls: GroupClass) -> np.ndarray:
    """Basis (k, 2, 2) of the 2x2 matrices commuting with theta."""
    th = theta(cls)
    eye = np.eye(2)
    # vec(P theta - theta P) = (theta^T kron I - I kron theta) vec(P), column-major vec
    op = np.kron(th.T, eye) - np.kron(eye, th)
    _, sv, vt = np.linalg.svd(op)
    rank = int(np.sum(sv > 1e-12))
    return np.array([v.reshape(2, 2, order="F") for v in vt[rank:]])


def conjugator_is_automorphism(cls: GroupClass, p: np.ndarray, k: KernelDescriptor) -> bool:
    """pi(t, v) = (t, P v) intertwines the flows on all of G iff P commutes with theta;
    on a kernel that forces t = 0 (where Lambda_t = 0) any invertible P does."""
    th = theta(cls)
    return k.forces_t_zero or float(np.linalg.norm(p @ th - th @ p)) < 1e-10


def random_conjugator(cls: GroupClass, k: KernelDescriptor, rng: np.random.Generator,
                      max_cond: float = 1e3) -> np.ndarray:
    basis = None if k.forces_t_zero else centralizer_basis(cls)
    while True:
        if basis is None:
            p = rng.normal(size=(2, 2))
        else:
            p = np.einsum("k,kij->ij", rng.normal(size=len(basis)), basis)
        if np.linalg.cond(p) < max_cond:
            return p


def transport_kernel(k: KernelDescriptor, p: np.ndarray) -> KernelDescriptor:
    """Kernel of h o pi^-1: functionals (L_t, L_v P^-1)."""
    pinv = np.linalg.inv(p)
    return KernelDescriptor.linear(np.column_stack([k.functionals[:, 0],
                                                    k.functionals[:, 1:] @ pinv]))


@dataclass(frozen=True)
class ConjugationCheck:
    ok: bool
    original: Status
    conjugated: Status
    automorphism: bool

    def __bool__(self) -> bool:
        return self.ok


def verdict_conjugation_check(cls: GroupClass, fld: FieldSpec, h: HomSpec, conj: ConjugationSpec,
                              t_window=(-10.0, 10.0), tol: Tolerances = DEFAULT) -> ConjugationCheck:
    k = kernel_of(cls, h)
    moved = conjugate_field(fld, conj, tol)
    va = classify_kernel(cls, fld, k, t_window, tol)
    vb = classify_kernel(cls, moved, transport_kernel(k, conj.p), t_window, tol)
    ok = va.status is vb.status and va.i_set.is_discrete == vb.i_set.is_discrete
    return ConjugationCheck(ok, va.status, vb.status, conjugator_is_automorphism(cls, conj.p, k))


# ------------------------------------------------------------------ Euclidean systems

@dataclass(frozen=True, eq=False)
class EuclideanSystem:
    a: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        a = np.atleast_2d(np.asarray(self.a, dtype=float))
        c = np.atleast_2d(np.asarray(self.c, dtype=float))
        n = a.shape[0]
        if n < 1 or a.shape != (n, n):
            raise ValueError(f"A must be square, got {a.shape}")
        if c.shape[1] != n:
            raise ValueError(f"C must have {n} columns, got {c.shape}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "c", c)


@dataclass(frozen=True)
class EuclideanReport:
    observable: bool
    unobservable_subspace_dim: int
    rank: int


def observability_matrix(sys: EuclideanSystem) -> np.ndarray:
    blocks = [sys.c]
    for _ in range(sys.a.shape[0] - 1):
        blocks.append(blocks[-1] @ sys.a)
    return np.vstack(blocks)


def euclidean_observability(sys: EuclideanSystem, tol: float = 1e-10) -> EuclideanReport:
    n = sys.a.shape[0]
    obs = observability_matrix(sys)
    rank = linalg.numeric_rank(obs, tol)
    return EuclideanReport(rank == n, n - rank, rank)
