"""Exponential polynomials  sum c * t^p * e^(r t) * {1, cos t, sin t}  and their real zeros.

Every scalar condition on the time coordinate ``t`` that comes out of the
fixed-point and indistinguishability analysis is such a function.  For the
purely real ones (no trigonometric terms) the zero set is isolated exactly:
multiply by ``e^(-r0 t)`` and differentiate, recurse on the derivative (one
fewer term), and bisect on each interval where the function is monotone.
Functions with trigonometric terms can have infinitely many zeros and fall
back to a windowed grid search.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

Key = Tuple[float, int, str]  # (rate, power, trig) with trig in {"", "cos", "sin"}

_MAX_BRACKET = 1e8


def _basis(key: Key, t: np.ndarray) -> np.ndarray:
    rate, power, trig = key
    out = np.exp(rate * t) * t ** power if power else np.exp(rate * t)
    if trig == "cos":
        out = out * np.cos(t)
    elif trig == "sin":
        out = out * np.sin(t)
    return out


class ExpPoly:
    """Immutable linear combination of basis functions keyed by ``(rate, power, trig)``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Key, float]] = None):
        clean = {}
        for k, c in (terms or {}).items():
            c = float(c)
            if c != 0.0:
                clean[(float(k[0]), int(k[1]), k[2])] = clean.get(k, 0.0) + c
        self.terms = clean

    @classmethod
    def t(cls) -> "ExpPoly":
        return cls({(0.0, 1, ""): 1.0})

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for k, c in self.terms.items():
            out = out + c * _basis(k, t)
        return out

    def magnitude(self, t):
        """Sum of absolute term values; the natural scale for a zero test at ``t``."""
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for k, c in self.terms.items():
            out = out + abs(c) * np.abs(_basis(k, t))
        return out

    def __add__(self, other: "ExpPoly") -> "ExpPoly":
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms.get(k, 0.0) + c
        return ExpPoly(terms)

    def scale(self, factor: float) -> "ExpPoly":
        return ExpPoly({k: factor * c for k, c in self.terms.items()})

    def max_coeff(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def cleaned(self, tol: float) -> "ExpPoly":
        return ExpPoly({k: c for k, c in self.terms.items() if abs(c) > tol})

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(abs(c) <= tol for c in self.terms.values())

    @property
    def is_real(self) -> bool:
        return all(k[2] == "" for k in self.terms)

    def __repr__(self) -> str:
        parts = []
        for (r, p, trig), c in sorted(self.terms.items()):
            f = "".join([f"t^{p}" if p else "", f"e^({r:g}t)" if r else "", f"{trig}(t)" if trig else ""])
            parts.append(f"{c:+.6g}" + (f"*{f}" if f else ""))
        return "ExpPoly(" + (" ".join(parts) or "0") + ")"


def combine(polys: Iterable[ExpPoly], weights: Iterable[float]) -> ExpPoly:
    out = ExpPoly()
    for p, w in zip(polys, weights):
        if w != 0.0:
            out = out + p.scale(w)
    return out


@dataclass(frozen=True)
class RootSet:
    roots: Tuple[float, ...]
    certified: bool  # True when every real zero on the whole line is listed
    window: Optional[Tuple[float, float]] = None


class IdenticallyZero(ValueError):
    pass


# ---------------------------------------------------------------- real case

def _trim(p: np.ndarray) -> np.ndarray:
    nz = np.nonzero(p)[0]
    return p[: nz[-1] + 1] if nz.size else p[:0]


def _groups(f: ExpPoly) -> Dict[float, np.ndarray]:
    groups: Dict[float, np.ndarray] = {}
    for (rate, power, _), c in f.terms.items():
        p = groups.get(rate, np.zeros(0))
        if p.size <= power:
            p = np.concatenate([p, np.zeros(power + 1 - p.size)])
        p[power] += c
        groups[rate] = p
    return {r: _trim(p) for r, p in groups.items() if _trim(p).size}


def _lead_sign(p: np.ndarray, at_minus_inf: bool) -> float:
    sign = math.copysign(1.0, p[-1])
    if at_minus_inf and (p.size - 1) % 2:
        sign = -sign
    return sign


class _Shifted:
    """h(t) = e^(-r0 t) f(t) = sum_k P_k(t) e^(k t) with all k >= 0."""

    def __init__(self, groups: Dict[float, np.ndarray]):
        r0 = min(groups)
        self.groups = {r - r0: p for r, p in groups.items()}
        self.kmax = max(self.groups)

    def scaled(self, t: float) -> Tuple[float, float]:
        # value and magnitude of h(t) * e^(-K t), K chosen to avoid overflow
        k_ref = self.kmax if t > 0 else 0.0
        val = mag = 0.0
        for k, p in self.groups.items():
            e = math.exp((k - k_ref) * t)
            terms = p * t ** np.arange(p.size) * e
            val += float(terms.sum())
            mag += float(np.abs(terms).sum())
        return val, mag

    def sign(self, t: float, tol: float) -> float:
        val, mag = self.scaled(t)
        if abs(val) <= tol * max(mag, 1e-300):
            return 0.0
        return math.copysign(1.0, val)

    def sign_at_inf(self, positive: bool) -> float:
        if positive:
            return _lead_sign(self.groups[self.kmax], False)
        return _lead_sign(self.groups[0.0], True)

    def derivative_groups(self) -> Dict[float, np.ndarray]:
        out = {}
        for k, p in self.groups.items():
            dp = np.polynomial.polynomial.polyder(p) if p.size > 1 else np.zeros(0)
            q = k * p
            q[: dp.size] += dp
            q = _trim(q)
            if q.size:
                out[k] = q
        return out


def _bisect(h: _Shifted, a: float, b: float, sa: float, tol: float) -> float:
    for _ in range(400):
        mid = 0.5 * (a + b)
        if b - a <= tol * max(1.0, abs(mid)):
            break
        sm = h.sign(mid, 0.0)
        if sm == 0.0:
            return mid
        if sm == sa:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def _real_roots(groups: Dict[float, np.ndarray], ztol: float, xtol: float) -> Tuple[list, bool]:
    if not groups:
        raise IdenticallyZero
    if len(groups) == 1:
        (p,) = groups.values()
        if p.size == 1:
            return [], True
        r = np.roots(p[::-1])
        scale = max(1.0, float(np.abs(r).max()))
        real = sorted(float(z.real) for z in r if abs(z.imag) <= 1e-9 * scale)
        return real, True

    h = _Shifted(groups)
    dgroups = h.derivative_groups()
    if not dgroups:
        # h' == 0 means h is a nonzero constant
        return [], True
    crit, certified = _real_roots(dgroups, ztol, xtol)
    crit = sorted(set(crit))

    roots = []
    for c in crit:
        if h.sign(c, ztol) == 0.0:
            roots.append(c)

    edges = [-math.inf] + crit + [math.inf]
    for a, b in zip(edges[:-1], edges[1:]):
        if math.isinf(a) and math.isinf(b):
            lo, hi = -1.0, 1.0
            sa, sb = h.sign_at_inf(False), h.sign_at_inf(True)
            if sa == sb:
                continue
            while h.sign(lo, 0.0) != sa and lo > -_MAX_BRACKET:
                lo *= 2
            while h.sign(hi, 0.0) != sb and hi < _MAX_BRACKET:
                hi *= 2
        else:
            if math.isinf(a):
                sa, sb = h.sign_at_inf(False), h.sign(b, ztol)
                lo, hi, step = b - 1.0, b, 1.0
                if sb == 0.0 or sa == sb:
                    continue
                while h.sign(lo, 0.0) != sa and step < _MAX_BRACKET:
                    step *= 2
                    lo = b - step
            elif math.isinf(b):
                sa, sb = h.sign(a, ztol), h.sign_at_inf(True)
                lo, hi, step = a, a + 1.0, 1.0
                if sa == 0.0 or sa == sb:
                    continue
                while h.sign(hi, 0.0) != sb and step < _MAX_BRACKET:
                    step *= 2
                    hi = a + step
            else:
                sa, sb = h.sign(a, ztol), h.sign(b, ztol)
                lo, hi = a, b
                if sa == 0.0 or sb == 0.0 or sa == sb:
                    continue
            if h.sign(lo, 0.0) == h.sign(hi, 0.0):
                certified = False
                continue
        roots.append(_bisect(h, lo, hi, h.sign(lo, 0.0), xtol))
    return sorted(roots), certified


# ------------------------------------------------------------- public API

def find_roots(f: ExpPoly, window: Tuple[float, float] = (-10.0, 10.0),
               ztol: float = 1e-10, xtol: float = 1e-12, grid: int = 2048) -> RootSet:
    """Real zeros of ``f``.

    Purely exponential functions get a certified, global root list; any
    trigonometric term falls back to sign bracketing on a ``grid``-point mesh
    over ``window`` plus bisection, and the result is marked uncertified.
    Raises ``IdenticallyZero`` for the zero function.
    """
    if f.is_zero():
        raise IdenticallyZero
    if f.is_real:
        roots, certified = _real_roots(_groups(f), ztol, xtol)
        return RootSet(tuple(_dedupe(roots, xtol)), certified, None)
    # tangential zeros from the grid are only good to ~sqrt(eps)
    return RootSet(tuple(_dedupe(_grid_roots(f, window, ztol, xtol, grid), 1e-9)),
                   False, tuple(window))


def _grid_roots(f: ExpPoly, window, ztol, xtol, n) -> list:
    lo, hi = window
    ts = np.linspace(lo, hi, n)
    vals = f(ts)
    mags = np.maximum(f.magnitude(ts), 1e-300)
    roots = [float(t) for t, v, m in zip(ts, vals, mags) if abs(v) <= ztol * m]

    sgn = np.sign(vals)
    for i in np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]:
        a, b = ts[i], ts[i + 1]
        fa = f(a)
        for _ in range(200):
            mid = 0.5 * (a + b)
            if b - a <= xtol * max(1.0, abs(mid)):
                break
            fm = f(mid)
            if np.sign(fm) == np.sign(fa):
                a, fa = mid, fm
            else:
                b = mid
        roots.append(0.5 * (a + b))

    # tangential zeros: local minima of |f| that do not change sign
    absf = np.abs(vals) / mags
    for i in range(1, n - 1):
        if absf[i] <= absf[i - 1] and absf[i] <= absf[i + 1] and sgn[i - 1] * sgn[i + 1] > 0:
            res = minimize_scalar(lambda t: abs(float(f(t))) / max(float(f.magnitude(t)), 1e-300),
                                  bounds=(ts[i - 1], ts[i + 1]), method="bounded",
                                  options={"xatol": xtol})
            if res.fun <= ztol:
                roots.append(float(res.x))
    return sorted(roots)


def _dedupe(roots, xtol) -> list:
    out = []
    for r in sorted(roots):
        if abs(r) <= 1e3 * xtol:
            r = 0.0
        if not out or abs(r - out[-1]) > 1e3 * xtol * max(1.0, abs(r)):
            out.append(r)
        elif r == 0.0:
            out[-1] = 0.0
    return out


def common_roots(polys, window=(-10.0, 10.0), ztol: float = 1e-10,
                 xtol: float = 1e-12) -> Optional[RootSet]:
    """Common real zeros of several exponential polynomials.

    Returns ``None`` when all of them vanish identically (every ``t`` is a
    solution).  Roots of one certified member are checked against the rest.
    """
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return None
    polys.sort(key=lambda p: (not p.is_real, len(p.terms)))
    base = find_roots(polys[0], window, ztol, xtol)
    keep = []
    for r in base.roots:
        ok = True
        for p in polys[1:]:
            if abs(float(p(r))) > max(ztol, 1e-8) * max(float(p.magnitude(r)), 1.0):
                ok = False
                break
        if ok:
            keep.append(r)
    return RootSet(tuple(keep), base.certified, base.window)
