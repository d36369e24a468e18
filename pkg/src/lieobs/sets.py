"""Symbolic descriptions of subsets of G and the fibred affine solver behind them.

Both the indistinguishability set and the fixed-point sets have the same
shape: for every time coordinate ``t`` the admissible ``v`` solve a linear
system ``M v = R z(t)`` whose matrix ``M`` does not depend on ``t`` and whose
right-hand side is linear in ``z(t) = (t, Lambda_t xi)``.  So the fibre over
``t`` is either empty or an affine plane of dimension ``2 - rank M``, and the
set of admissible ``t`` is the common zero set of a few exponential
polynomials (the components of ``R z(t)`` orthogonal to the column space of
``M``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np

from .expoly import ExpPoly, combine, common_roots
from .groups import GroupClass, lambda_basis, lambda_of
from .tolerances import DEFAULT, Tolerances


class SetKind(str, enum.Enum):
    Trivial = "Trivial"
    DiscreteList = "DiscreteList"
    Line = "Line"
    Plane = "Plane"
    Curve = "Curve"
    FullGroup = "FullGroup"
    NumericOnly = "NumericOnly"


class WindowLimited(RuntimeError):
    """Raised in strict mode when a zero set in ``t`` could only be searched on a window."""


@dataclass(frozen=True, eq=False)
class SetDescriptor:
    kind: SetKind
    # None means every t is admissible
    t_values: Optional[Tuple[float, ...]] = None
    directions: np.ndarray = field(default_factory=lambda: np.zeros((2, 0)))
    particular: Optional[Callable[[float], np.ndarray]] = None
    points: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))
    window_limited: bool = False
    window: Optional[Tuple[float, float]] = None
    description: str = ""
    cluster_radius: float = DEFAULT.identity_cluster
    omitted: int = 0                 # certified roots outside the window left out of t_values

    @property
    def is_discrete(self) -> bool:
        if self.kind is SetKind.NumericOnly:
            return bool(np.all(np.linalg.norm(self.points, axis=-1) < self.cluster_radius))
        return self.kind in (SetKind.Trivial, SetKind.DiscreteList)

    @property
    def fibre_dim(self) -> int:
        return self.directions.shape[1]

    def contains(self, g, tol: float = 1e-10) -> bool:
        g = np.asarray(g, dtype=float)
        if self.kind is SetKind.NumericOnly:
            return bool(np.any(np.linalg.norm(self.points - g, axis=-1) <= tol))
        t = float(g[0])
        if self.t_values is not None and not any(abs(t - s) <= tol * max(1.0, abs(s))
                                                 for s in self.t_values):
            return False
        r = g[1:] - self.particular(t)
        if self.fibre_dim:
            q, _ = np.linalg.qr(self.directions)
            r = r - q @ (q.T @ r)
        return bool(np.linalg.norm(r) <= tol * max(1.0, np.linalg.norm(g[1:])))

    def sample(self, rng: np.random.Generator, n: int, t_range=(-2.0, 2.0),
               amplitude: float = 2.0) -> np.ndarray:
        """Points of the set (for discrete sets: the listed points)."""
        if self.kind is SetKind.NumericOnly or self.is_discrete:
            return self.points.copy()
        if self.t_values is None:
            ts = rng.uniform(*t_range, size=n)
        else:
            ts = rng.choice(np.asarray(self.t_values), size=n)
        out = np.empty((n, 3))
        for i, t in enumerate(ts):
            v = self.particular(t)
            if self.fibre_dim:
                v = v + self.directions @ rng.uniform(-amplitude, amplitude, self.fibre_dim)
            out[i] = (t, *v)
        return out

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "discrete": self.is_discrete,
             "fibre_dim": self.fibre_dim,
             "t_values": None if self.t_values is None else [float(t) for t in self.t_values],
             "window_limited": self.window_limited, "omitted_outside_window": self.omitted,
             "description": self.description}
        if self.points.size:
            d["points"] = [[float(c) for c in p] for p in self.points]
        return d


def numeric_set(points: np.ndarray, window_limited: bool = False, description: str = "",
                cluster_radius: float = DEFAULT.identity_cluster) -> SetDescriptor:
    return SetDescriptor(SetKind.NumericOnly, points=np.asarray(points, dtype=float).reshape(-1, 3),
                         window_limited=window_limited, description=description,
                         cluster_radius=cluster_radius)


def _z_polys(cls: GroupClass, xi: np.ndarray) -> list:
    """ExpPoly form of z(t) = (t, (Lambda_t xi)_1, (Lambda_t xi)_2)."""
    comps = [{}, {}]
    for key, mat in lambda_basis(cls).items():
        w = mat @ xi
        for i in range(2):
            comps[i][key] = comps[i].get(key, 0.0) + w[i]
    return [ExpPoly.t(), ExpPoly(comps[0]), ExpPoly(comps[1])]


def z_of(cls: GroupClass, xi: np.ndarray, t: float) -> np.ndarray:
    return np.concatenate([[t], lambda_of(cls, t) @ xi])


def solve_fibred(cls: GroupClass, xi, rows, rhs_map, *, window=(-10.0, 10.0),
                 tol: Tolerances = DEFAULT, label: str = "", clip: bool = False) -> SetDescriptor:
    """Describe {(t, v) : rows @ v = rhs_map @ z(t)} symbolically.

    Certified root lists cover the whole line; with ``clip`` only the roots
    inside ``window`` are listed and the rest are counted in ``omitted``.
    """
    xi = np.asarray(xi, dtype=float)
    rows = np.asarray(rows, dtype=float).reshape(-1, 2)
    rhs_map = np.asarray(rhs_map, dtype=float).reshape(-1, 3)

    if rows.shape[0]:
        u, sv, vt = np.linalg.svd(rows)
        rank = int(np.sum(sv > tol.rank * max(1.0, sv[0])))
        directions = vt[rank:].T
        left_null = u[:, rank:].T
        pinv = vt[:rank].T @ np.diag(1.0 / sv[:rank]) @ u[:, :rank].T
    else:
        directions = np.eye(2)
        left_null = np.zeros((0, 0))
        pinv = np.zeros((2, 0))

    zp = _z_polys(cls, xi)
    scale = max(1.0, float(np.abs(rhs_map).max(initial=0.0))) * \
        max(1.0, max(p.max_coeff() for p in zp))
    rhs_polys = [combine(zp, r) for r in rhs_map]
    consistency = [combine(rhs_polys, q).cleaned(tol.rank * scale) for q in left_null]

    pmap = pinv @ rhs_map

    def particular(t: float, _pmap=pmap) -> np.ndarray:
        return _pmap @ z_of(cls, xi, t)

    roots = common_roots(consistency, window, tol.root_zero, tol.root_x)
    dim = directions.shape[1]
    omitted = 0
    if roots is None:
        t_values = None
        kind = {0: SetKind.Curve, 1: SetKind.Plane, 2: SetKind.FullGroup}[dim]
        limited, win = False, None
        points = np.zeros((0, 3))
    else:
        t_values = tuple(sorted(set(roots.roots) | {0.0}))
        if clip:
            inside = tuple(t for t in t_values if window[0] <= t <= window[1])
            omitted, t_values = len(t_values) - len(inside), inside
        limited, win = not roots.certified, roots.window
        if dim == 0:
            kind = SetKind.Trivial if t_values == (0.0,) and not omitted else SetKind.DiscreteList
        else:
            kind = SetKind.Line if dim == 1 else SetKind.Plane
        points = np.array([[t, *particular(t)] for t in t_values]) if dim == 0 \
            else np.zeros((0, 3))
        if kind is SetKind.Trivial:
            points = np.zeros((1, 3))
    desc = _describe(kind, t_values, dim, limited, label)
    if omitted:
        desc += f" ({omitted} more outside {tuple(window)})"
    return SetDescriptor(kind, t_values, directions, particular, points, limited, win, desc,
                         tol.identity_cluster, omitted)


def _describe(kind, t_values, dim, limited, label) -> str:
    if kind is SetKind.Trivial:
        what = "identity only"
    elif t_values is None:
        what = f"{dim}-dim affine fibre over every t"
    else:
        ts = ", ".join(f"{t:.12g}" for t in t_values)
        what = f"{dim}-dim affine fibre over t in {{{ts}}}"
    if limited:
        what += " (t search limited to window)"
    return f"{label}: {what}" if label else what
