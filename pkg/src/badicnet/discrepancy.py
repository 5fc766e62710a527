"""Star discrepancy of planar point sets, exactly where possible.

Everything here works on PointSet2, whose coordinates are integers over
one common denominator D.  Counting functions are then integer valued on
the grid spanned by the coordinate values, which makes the L_2 formula,
even-exponent L_p integrals, and the L_inf corner sweep exact integer
computations; only the square root and non-even exponents bring floats
in.  The local discrepancy convention is the strict half-open box
[0, t): points on the upper faces do not count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Sequence

import numpy as np
from scipy.integrate import quad

from .nets import PointSet2

_BLOCK_ELEMS = 1 << 23


@dataclass(frozen=True)
class DiscrepancyResult:
    """A discrepancy value with its provenance.

    exact is the p-th power of the value as a rational for the exact
    methods (and the value itself for the sup norm); None when the number
    came out of quadrature.
    """

    p: float
    value: float
    method: str
    error_bound: float
    exact: Fraction | None = None


def local_discrepancy(ps: PointSet2, t: Sequence) -> Fraction:
    """count([0,t) cap P)/N - t1*t2, exact."""
    t1, t2 = Fraction(t[0]), Fraction(t[1])
    if not (0 <= t1 <= 1 and 0 <= t2 <= 1):
        raise ValueError("box corner outside the unit square")
    N = ps.n_points
    if N == 0:
        raise ValueError("empty point set")
    D = ps.den
    cnt = 0
    for a, c in ps.nums:
        if int(a) * t1.denominator < t1.numerator * D and int(c) * t2.denominator < t2.numerator * D:
            cnt += 1
    return Fraction(cnt, N) - t1 * t2


# ---------------------------------------------------------------------------
# L2 by the closed pair formula


def _pair_sum_int64(a: np.ndarray, c: np.ndarray, D: int) -> int:
    """sum over ordered pairs of (D - max(a_i, a_k)) (D - max(c_i, c_k))."""
    N = a.shape[0]
    per_elem = D * D
    block = max(1, min(_BLOCK_ELEMS // max(N, 1), (1 << 62) // max(per_elem * N, 1)))
    total = 0
    for lo in range(0, N, block):
        hi = min(lo + block, N)
        M1 = np.maximum.outer(a[lo:hi], a)
        np.subtract(D, M1, out=M1)
        M2 = np.maximum.outer(c[lo:hi], c)
        np.subtract(D, M2, out=M2)
        M1 *= M2
        total += int(M1.sum(dtype=object)) if N * per_elem > (1 << 62) else int(M1.sum())
    return total


def _pair_sum_object(nums, D: int) -> int:
    pts = [(int(x), int(y)) for x, y in nums]
    total = 0
    for ax, ay in pts:
        for cx, cy in pts:
            total += (D - max(ax, cx)) * (D - max(ay, cy))
    return total


def l2_star(ps: PointSet2) -> DiscrepancyResult:
    """Exact L2 star discrepancy via the pairwise max formula.

    L2^2 = 1/9 - 2/N sum_x prod_j (1-x_j^2)/2 + 1/N^2 sum_{x,y} prod_j (1 - max(x_j, y_j))
    evaluated in integer arithmetic over the common denominator.
    """
    N = ps.n_points
    if N == 0:
        raise ValueError("empty point set")
    D = ps.den
    s2 = 0
    for a, c in ps.nums:
        a, c = int(a), int(c)
        s2 += (D * D - a * a) * (D * D - c * c)
    if ps.nums.dtype == object or N * D * D > (1 << 61):
        s3 = _pair_sum_object(ps.nums, D)
    else:
        a = ps.nums[:, 0].astype(np.int64)
        c = ps.nums[:, 1].astype(np.int64)
        s3 = _pair_sum_int64(a, c, D)
    l2sq = Fraction(1, 9) - Fraction(s2, 2 * N * D**4) + Fraction(s3, N * N * D * D)
    value = math.sqrt(l2sq)
    return DiscrepancyResult(2.0, value, "warnock", 1e-14 * max(value, 1.0), l2sq)


# ---------------------------------------------------------------------------
# grid decomposition shared by L_p and L_inf


def _grids(ps: PointSet2):
    D = ps.den
    gx = np.unique(np.concatenate([np.array([0, D], dtype=ps.nums.dtype), ps.nums[:, 0]]))
    gy = np.unique(np.concatenate([np.array([0, D], dtype=ps.nums.dtype), ps.nums[:, 1]]))
    return gx, gy


def _cell_counts(ps: PointSet2, gx, gy) -> np.ndarray:
    """C[i, j] = number of points with x <= gx[i] and y <= gy[j]."""
    ix = np.searchsorted(gx, ps.nums[:, 0])
    iy = np.searchsorted(gy, ps.nums[:, 1])
    cnt = np.zeros((len(gx), len(gy)), dtype=np.int64)
    np.add.at(cnt, (ix, iy), 1)
    return cnt.cumsum(axis=0).cumsum(axis=1)


def lp_star(ps: PointSet2, p) -> DiscrepancyResult:
    """L_p star discrepancy on the cell decomposition of the unit square.

    The counting function is constant on every half-open grid cell, so
    even integer p reduces to exact rational integrals of polynomials.
    Other finite p >= 1 use per-cell quadrature of the one remaining
    outer variable (the inner integral has a closed form); the combined
    absolute quadrature error on the p-th power is kept below 1e-10.
    """
    if p == math.inf:
        return linf_star(ps)
    p = float(p)
    if p < 1:
        raise ValueError("p must be >= 1 (or inf)")
    N = ps.n_points
    if N == 0:
        raise ValueError("empty point set")
    if p == int(p) and int(p) % 2 == 0:
        return _lp_even_exact(ps, int(p))
    return _lp_quadrature(ps, p)


def _lp_even_exact(ps: PointSet2, p: int) -> DiscrepancyResult:
    N, D = ps.n_points, ps.den
    gx, gy = _grids(ps)
    C = _cell_counts(ps, gx, gy)
    # antiderivative pieces per axis: (g_{i+1}^{q+1} - g_i^{q+1}) / ((q+1) D^{q+1})
    xint = [[None] * (p + 1) for _ in range(len(gx) - 1)]
    yint = [[None] * (p + 1) for _ in range(len(gy) - 1)]
    for q in range(p + 1):
        dq = (q + 1) * D ** (q + 1)
        for i in range(len(gx) - 1):
            xint[i][q] = Fraction(int(gx[i + 1]) ** (q + 1) - int(gx[i]) ** (q + 1), dq)
        for j in range(len(gy) - 1):
            yint[j][q] = Fraction(int(gy[j + 1]) ** (q + 1) - int(gy[j]) ** (q + 1), dq)
    binoms = [comb(p, q) * (-1) ** q for q in range(p + 1)]
    total = Fraction(0)
    for i in range(len(gx) - 1):
        for j in range(len(gy) - 1):
            cf = Fraction(int(C[i, j]), N)
            cell = Fraction(0)
            for q in range(p + 1):
                cell += binoms[q] * cf ** (p - q) * xint[i][q] * yint[j][q]
            total += cell
    value = float(total) ** (1.0 / p)
    return DiscrepancyResult(float(p), value, "piecewise_exact", 1e-14 * max(value, 1.0), total)


def _lp_quadrature(ps: PointSet2, p: float) -> DiscrepancyResult:
    N, D = ps.n_points, ps.den
    gx, gy = _grids(ps)
    C = _cell_counts(ps, gx, gy)
    gxf = np.array([int(v) for v in gx], dtype=float) / D
    gyf = np.array([int(v) for v in gy], dtype=float) / D
    v_lo = gyf[:-1]
    v_hi = gyf[1:]

    def s_pow(w):
        return np.sign(w) * np.abs(w) ** (p + 1.0)

    pieces = []  # (t_lo, t_hi, counts row)
    for i in range(len(gx) - 1):
        t_lo, t_hi = gxf[i], gxf[i + 1]
        if t_hi <= t_lo:
            continue
        A = C[i, : len(gyf) - 1] / N
        # inner-integral kinks: t1 where A - t1 * v changes sign inside the cell
        cuts = {t_lo, t_hi}
        for Aj, vj, wj in zip(A, v_lo, v_hi):
            for v in (vj, wj):
                if v > 0 and Aj > 0:
                    t = Aj / v
                    if t_lo < t < t_hi:
                        cuts.add(t)
        cs = sorted(cuts)
        for lo, hi in zip(cs[:-1], cs[1:]):
            pieces.append((lo, hi, A))

    eps_each = 1e-10 / max(len(pieces), 1)
    total = 0.0
    err = 0.0
    for lo, hi, A in pieces:

        def outer(t1, A=A):
            if t1 <= 0:
                return float(np.sum(np.abs(A) ** p * (v_hi - v_lo)))
            inner = (s_pow(A - t1 * v_lo) - s_pow(A - t1 * v_hi)) / (t1 * (p + 1.0))
            return float(inner.sum())

        val, e = quad(outer, lo, hi, epsabs=eps_each, epsrel=1e-12, limit=200)
        total += val
        err += e
    err = max(err, 1e-15)
    value = total ** (1.0 / p)
    bound = (total + err) ** (1.0 / p) - value
    return DiscrepancyResult(p, value, "quadrature", bound + 1e-15, None)


def linf_star(ps: PointSet2) -> DiscrepancyResult:
    """Sup of |local discrepancy|, exact.

    On each grid cell the sup is attained in the limit at the lower
    corner (count held, box shrunk) or at the closed upper corner, so a
    sweep over both corner families suffices.
    """
    N, D = ps.n_points, ps.den
    if N == 0:
        raise ValueError("empty point set")
    gx, gy = _grids(ps)
    small = ps.nums.dtype != object and N * D * D < (1 << 61)
    best = Fraction(0)
    if small:
        iy = np.searchsorted(gy, ps.nums[:, 1])
        ix = np.searchsorted(gx, ps.nums[:, 0])
        hist = np.zeros(len(gy), dtype=np.int64)
        gy_lo = gy[:-1].astype(np.int64)
        gy_hi = gy[1:].astype(np.int64)
        best_num = 0
        order = np.argsort(ix, kind="stable")
        pos = 0
        for i in range(len(gx) - 1):
            while pos < len(order) and ix[order[pos]] == i:
                hist[iy[order[pos]]] += 1
                pos += 1
            row = np.cumsum(hist)[: len(gy) - 1]
            v1 = row * D * D - N * int(gx[i]) * gy_lo
            v2 = row * D * D - N * int(gx[i + 1]) * gy_hi
            m = max(int(np.abs(v1).max()), int(np.abs(v2).max()))
            if m > best_num:
                best_num = m
        best = Fraction(best_num, N * D * D)
    else:
        C = _cell_counts(ps, gx, gy)
        for i in range(len(gx) - 1):
            for j in range(len(gy) - 1):
                c = int(C[i, j])
                for u, v in ((int(gx[i]), int(gy[j])), (int(gx[i + 1]), int(gy[j + 1]))):
                    cand = abs(Fraction(c, N) - Fraction(u * v, D * D))
                    if cand > best:
                        best = cand
    return DiscrepancyResult(math.inf, float(best), "corner_sweep", 0.0, best)


def truncation_bound(base: int, m: int, n: int, p) -> float:
    """Worst growth of L_p when the symmetrized Hammersley tail is cut at
    digit n: b^-(m + 2(n-m-1)/p)."""
    if n < m + 2:
        raise ValueError("truncation too short: need n >= m + 2")
    if p != math.inf and p < 1:
        raise ValueError("p must be >= 1 (or inf)")
    expo = float(m) if p == math.inf else m + 2.0 * (n - m - 1) / float(p)
    return float(base) ** (-expo)
