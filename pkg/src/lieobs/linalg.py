"""Small dense-matrix helpers: 2x2 exponentials and a batched Taylor expm."""

from __future__ import annotations

import numpy as np

# ||A|| threshold after scaling; Taylor remainder below eps for 18 terms
_SCALE_TARGET = 0.5
_TAYLOR_TERMS = 18


def expm_taylor(a: np.ndarray) -> np.ndarray:
    """Scaling-and-squaring Taylor exponential.

    Works on a single square matrix or a stack ``(..., n, n)``; every matrix
    in the stack gets its own number of squarings.
    """
    a = np.asarray(a, dtype=float)
    single = a.ndim == 2
    if single:
        a = a[None]
    n = a.shape[-1]
    norms = np.abs(a).sum(axis=-2).max(axis=-1)  # 1-norm
    with np.errstate(divide="ignore"):
        squarings = np.where(norms > _SCALE_TARGET,
                             np.ceil(np.log2(np.maximum(norms, 1e-300) / _SCALE_TARGET)), 0)
    squarings = squarings.astype(int)
    scaled = a / (2.0 ** squarings)[..., None, None]

    eye = np.broadcast_to(np.eye(n), scaled.shape)
    result = eye.copy()
    term = eye.copy()
    for k in range(1, _TAYLOR_TERMS + 1):
        term = term @ scaled / k
        result = result + term

    for i in range(int(squarings.max(initial=0))):
        mask = squarings > i
        result[mask] = result[mask] @ result[mask]
    return result[0] if single else result


def discriminant(a: np.ndarray) -> float:
    """(a - d)^2 + 4bc, the eigenvalue discriminant of a 2x2 matrix."""
    return float((a[0, 0] - a[1, 1]) ** 2 + 4.0 * a[0, 1] * a[1, 0])


def boundary_tol(a: np.ndarray, rel: float = 1e-9) -> float:
    return rel * (1.0 + float(np.sum(np.asarray(a) ** 2)))


def expm2(a: np.ndarray, s=1.0, boundary: float = 1e-10) -> np.ndarray:
    """exp(s*A) for a 2x2 matrix ``A`` and scalar or array ``s``.

    Closed form through the trace/discriminant split A = mI + N, N^2 = (disc/4) I.
    When the discriminant is within ``boundary`` of zero (Jordan/complex
    transition) the Taylor routine is used instead.
    """
    a = np.asarray(a, dtype=float)
    s_arr = np.asarray(s, dtype=float)
    scalar = s_arr.ndim == 0
    s_arr = np.atleast_1d(s_arr)

    disc = discriminant(a)
    if abs(disc) <= boundary * (1.0 + float(np.sum(a ** 2))):
        out = expm_taylor(s_arr[:, None, None] * a)
        return out[0] if scalar else out

    m = 0.5 * (a[0, 0] + a[1, 1])
    nil = a - m * np.eye(2)
    q = 0.5 * np.sqrt(abs(disc))
    if disc > 0:
        c = np.cosh(s_arr * q)
        sn = np.sinh(s_arr * q) / q
    else:
        c = np.cos(s_arr * q)
        sn = np.sin(s_arr * q) / q
    scale = np.exp(s_arr * m)
    out = scale[:, None, None] * (c[:, None, None] * np.eye(2) + sn[:, None, None] * nil)
    return out[0] if scalar else out


def phi1_block(a: np.ndarray, s=1.0) -> np.ndarray:
    """sum_{j>=1} s^j A^(j-1) / j!, read off the 4x4 block exponential.

    exp([[sA, sI], [0, 0]]) has this matrix as its top-right block, so no
    inverse of ``A`` is ever formed.
    """
    a = np.asarray(a, dtype=float)
    s_arr = np.asarray(s, dtype=float)
    scalar = s_arr.ndim == 0
    s_arr = np.atleast_1d(s_arr)
    blocks = np.zeros((s_arr.size, 4, 4))
    blocks[:, :2, :2] = s_arr[:, None, None] * a
    blocks[:, 0, 2] = s_arr
    blocks[:, 1, 3] = s_arr
    out = expm_taylor(blocks)[:, :2, 2:]
    return out[0] if scalar else out


def rotation(angle) -> np.ndarray:
    angle = np.asarray(angle, dtype=float)
    c, s = np.cos(angle), np.sin(angle)
    return np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)


def numeric_rank(m: np.ndarray, tol: float = 1e-10) -> int:
    if m.size == 0:
        return 0
    sv = np.linalg.svd(m, compute_uv=False)
    return int(np.sum(sv > tol * max(1.0, sv[0])))
