"""Compiled inner loops for the Aberth iteration.

Two evaluators of the Cauchy sums ``sum w/(z - s)`` are provided:

* direct: O(d) per target.  Roots and iterates are passed as separate
  real/imaginary arrays so the reductions vectorize under fastmath.
  Because fastmath assumes finite values, an exact hit on a root is
  detected from the minimum squared distance, never from an ``inf``.
* blocked: the circle is cut into ``B`` angular blocks.  Sources far from
  a block (at least ``3R`` from its center, ``R`` the block radius) are
  folded into a truncated Taylor expansion about the center; near sources
  are summed directly.  Targets that are not inside their block's disc
  (interior critical points) fall back to the direct sum.

Convergence test for an iterate ``y``::

    |S(y)| <= tol * d / dist(y, roots) + KAPPA * eps * |y| * |S'(y)|

The second term is the rounding floor: ``y`` is only known to about
``eps * |y|``, which matters when two roots nearly collide and the
critical point between them sits 1e-9 away from both.
"""
import numpy as np
from numba import njit

EPS = np.finfo(np.float64).eps
KAPPA = 16.0
TAYLOR_TERMS = 28
FAR_RATIO = 3.0


@njit(fastmath=True, error_model="numpy", cache=True)
def _field_simple(x, y, rr, ri):
    # all multiplicities one: S, S' and min |z - root|^2
    s_r = 0.0
    s_i = 0.0
    p_r = 0.0
    p_i = 0.0
    amin = np.inf
    for i in range(rr.shape[0]):
        wr = x - rr[i]
        wi = y - ri[i]
        a = wr * wr + wi * wi
        amin = min(amin, a)
        c = 1.0 / a
        ir = wr * c
        ii = wi * c
        s_r += ir
        s_i -= ii
        p_r += ir * ir - ii * ii
        p_i += ir * ii
    # S' = -sum conj(w)^2 / |w|^4
    return s_r, s_i, -p_r, 2.0 * p_i, s_r, s_i, amin


@njit(fastmath=True, error_model="numpy", cache=True)
def _field_weighted(x, y, rr, ri, mult):
    # weighted S, S' plus unweighted T; vectorizes less well, but repeated
    # roots only arise from atomic draws with few distinct atoms
    s_r = 0.0
    s_i = 0.0
    p_r = 0.0
    p_i = 0.0
    t_r = 0.0
    t_i = 0.0
    amin = np.inf
    for i in range(rr.shape[0]):
        wr = x - rr[i]
        wi = y - ri[i]
        a = wr * wr + wi * wi
        amin = min(amin, a)
        c = 1.0 / a
        ir = wr * c
        ii = wi * c
        t_r += ir
        t_i -= ii
        s_r += mult[i] * ir
        s_i -= mult[i] * ii
        p_r += mult[i] * (ir * ir - ii * ii)
        p_i += mult[i] * (ir * ii)
    return s_r, s_i, -p_r, 2.0 * p_i, t_r, t_i, amin


@njit(cache=True)
def _field(x, y, rr, ri, mult, weighted):
    if weighted:
        return _field_weighted(x, y, rr, ri, mult)
    return _field_simple(x, y, rr, ri)


@njit(fastmath=True, error_model="numpy", cache=True)
def _pair_sum(j, x, y, yr, yi):
    a_r = 0.0
    a_i = 0.0
    for k in range(j):
        wr = x - yr[k]
        wi = y - yi[k]
        c = 1.0 / (wr * wr + wi * wi)
        a_r += wr * c
        a_i -= wi * c
    for k in range(j + 1, yr.shape[0]):
        wr = x - yr[k]
        wi = y - yi[k]
        c = 1.0 / (wr * wr + wi * wi)
        a_r += wr * c
        a_i -= wi * c
    return a_r, a_i


@njit(cache=True)
def _criterion(s, sp, amin, x, y, d, tol):
    """Normalized residual; converged iff it is <= tol."""
    scale = d / np.sqrt(amin) + KAPPA * EPS * np.sqrt(x * x + y * y) * abs(sp) / tol
    return abs(s) / scale


@njit(cache=True)
def _newton_size(s, sp):
    """``|p'/p''| = |S/(S**2 + S')|``; inf where p'' vanishes."""
    den = s * s + sp
    if den == 0:
        return np.inf
    return abs(s / den)


@njit(cache=True)
def _nudge(yr, yi, j, d):
    x = yr[j]
    y = yi[j]
    yr[j] = x * (1.0 - 1e-3 / d) - y * 1e-3 / d
    yi[j] = y * (1.0 - 1e-3 / d) + x * 1e-3 / d


@njit(cache=True)
def _aberth_update(yr, yi, j, s, sp, acc, d):
    """Apply one Aberth step to iterate j; False if p'' vanished."""
    den = s * s + sp
    if den == 0:
        _nudge(yr, yi, j, d)
        return False
    corr = s / den
    z = complex(yr[j], yi[j]) - corr / (1.0 - corr * acc)
    yr[j] = z.real
    yi[j] = z.imag
    return True


@njit(cache=True)
def aberth_sweep(rr, ri, mult, weighted, yr, yi, active, tol, resid, step):
    """One Gauss-Seidel Aberth sweep with direct sums.

    Iterates meeting the convergence test are frozen instead of updated.
    Returns the number of iterates that moved.
    """
    d = rr.shape[0]
    moved = 0
    for j in range(yr.shape[0]):
        if not active[j]:
            continue
        x = yr[j]
        y = yi[j]
        s_r, s_i, p_r, p_i, t_r, t_i, amin = _field(x, y, rr, ri, mult, weighted)
        if amin == 0.0:
            # sitting on a root
            _nudge(yr, yi, j, d)
            resid[j] = np.inf
            step[j] = np.inf
            moved += 1
            continue
        s = complex(s_r, s_i)
        sp = complex(p_r, p_i)
        res = _criterion(s, sp, amin, x, y, d, tol)
        resid[j] = res
        step[j] = _newton_size(s, sp)
        if res <= tol:
            active[j] = False
            continue
        a_r, a_i = _pair_sum(j, x, y, yr, yi)
        # fixed deflated zeros of p' enter the Aberth sum as S - T
        acc = complex(a_r + s_r - t_r, a_i + s_i - t_i)
        _aberth_update(yr, yi, j, s, sp, acc, d)
        moved += 1
    return moved


@njit(cache=True)
def residuals(rr, ri, mult, weighted, yr, yi, out, tol, step):
    """Normalized residual at every iterate, by direct sums."""
    d = rr.shape[0]
    for j in range(yr.shape[0]):
        s_r, s_i, p_r, p_i, t_r, t_i, amin = _field(yr[j], yi[j], rr, ri, mult, weighted)
        if amin == 0.0:
            out[j] = np.inf
            step[j] = np.inf
        else:
            s = complex(s_r, s_i)
            sp = complex(p_r, p_i)
            out[j] = _criterion(s, sp, amin, yr[j], yi[j], d, tol)
            step[j] = _newton_size(s, sp)


# ---------------------------------------------------------------- blocked


@njit(cache=True)
def block_centers(nblocks):
    c = np.empty(nblocks, dtype=np.complex128)
    for b in range(nblocks):
        c[b] = np.exp(2j * np.pi * (b + 0.5) / nblocks)
    return c


@njit(cache=True)
def _block_of(x, y, nblocks):
    t = np.arctan2(y, x) / (2 * np.pi)
    if t < 0:
        t += 1.0
    b = int(t * nblocks)
    return min(b, nblocks - 1)


@njit(cache=True)
def build_blocks(xs, ys, centers, radius, nterms):
    """Taylor coefficients of far sources and CSR lists of near sources.

    ``coef[b, q]`` satisfies ``sum_far 1/(z - s) = sum_q coef[b, q] (z - c_b)^q``
    for ``|z - c_b| <= radius``.
    """
    nb = centers.shape[0]
    m = xs.shape[0]
    far2 = (FAR_RATIO * radius) ** 2
    coef = np.zeros((nb, nterms), dtype=np.complex128)
    near = np.empty(m, dtype=np.int64)
    ptr = np.zeros(nb + 1, dtype=np.int64)
    chunks = []
    for b in range(nb):
        cr = centers[b].real
        ci = centers[b].imag
        n_near = 0
        for k in range(m):
            dr = xs[k] - cr
            di = ys[k] - ci
            a = dr * dr + di * di
            if a < far2:
                near[n_near] = k
                n_near += 1
            else:
                t = complex(dr, -di) / a
                tp = t
                for q in range(nterms):
                    coef[b, q] -= tp
                    tp *= t
        ptr[b + 1] = ptr[b] + n_near
        chunks.append(near[:n_near].copy())
    idx = np.empty(ptr[nb], dtype=np.int64)
    for b in range(nb):
        idx[ptr[b]:ptr[b + 1]] = chunks[b]
    return coef, ptr, idx


@njit(cache=True)
def _taylor(coef, b, w):
    # value and derivative of sum_q coef[b, q] w^q
    nterms = coef.shape[1]
    v = coef[b, nterms - 1]
    dv = 0j
    for q in range(nterms - 2, -1, -1):
        dv = dv * w + v
        v = v * w + coef[b, q]
    return v, dv


@njit(fastmath=True, error_model="numpy", cache=True)
def _near_field(x, y, xs, ys, ptr, idx, b, skip):
    s_r = 0.0
    s_i = 0.0
    p_r = 0.0
    p_i = 0.0
    amin = np.inf
    for pos in range(ptr[b], ptr[b + 1]):
        k = idx[pos]
        if k == skip:
            continue
        wr = x - xs[k]
        wi = y - ys[k]
        a = wr * wr + wi * wi
        amin = min(amin, a)
        c = 1.0 / a
        ir = wr * c
        ii = wi * c
        s_r += ir
        s_i -= ii
        p_r += ir * ir - ii * ii
        p_i += ir * ii
    return complex(s_r, s_i), complex(-p_r, 2.0 * p_i), amin


@njit(cache=True)
def _in_list(ptr, idx, b, j):
    for pos in range(ptr[b], ptr[b + 1]):
        if idx[pos] == j:
            return True
    return False


@njit(cache=True)
def aberth_sweep_blocked(rr, ri, rcoef, rptr, ridx, centers, radius, nterms,
                         yr, yi, active, tol, resid, step):
    """Gauss-Seidel Aberth sweep using blocked sums (simple roots only).

    Far iterates enter through expansions built from the positions at the
    start of the sweep; near iterates use current positions.  At a fixed
    point the two agree, so the converged set is unaffected.
    """
    d = rr.shape[0]
    nb = centers.shape[0]
    ycoef, yptr, yidx = build_blocks(yr, yi, centers, radius, nterms)
    far = FAR_RATIO * radius
    moved = 0
    for j in range(yr.shape[0]):
        if not active[j]:
            continue
        x = yr[j]
        y = yi[j]
        z = complex(x, y)
        b = _block_of(x, y, nb)
        w = z - centers[b]
        fast = abs(w) <= radius and _in_list(yptr, yidx, b, j)
        if fast:
            sn, spn, amin = _near_field(x, y, rr, ri, rptr, ridx, b, -1)
            # the nearest root must be a near one for dist to be exact
            fast = amin <= (far - radius) ** 2
        if fast:
            sv, sdv = _taylor(rcoef, b, w)
            s = sv + sn
            sp = sdv + spn
        else:
            s_r, s_i, p_r, p_i, t_r, t_i, amin = _field_simple(x, y, rr, ri)
            s = complex(s_r, s_i)
            sp = complex(p_r, p_i)
        if amin == 0.0:
            _nudge(yr, yi, j, d)
            resid[j] = np.inf
            step[j] = np.inf
            moved += 1
            continue
        res = _criterion(s, sp, amin, x, y, d, tol)
        resid[j] = res
        step[j] = _newton_size(s, sp)
        if res <= tol:
            active[j] = False
            continue
        if fast:
            av, _ = _taylor(ycoef, b, w)
            an, _, _ = _near_field(x, y, yr, yi, yptr, yidx, b, j)
            acc = av + an
        else:
            a_r, a_i = _pair_sum(j, x, y, yr, yi)
            acc = complex(a_r, a_i)
        _aberth_update(yr, yi, j, s, sp, acc, d)
        moved += 1
    return moved


@njit(cache=True)
def residuals_blocked(rr, ri, rcoef, rptr, ridx, centers, radius, yr, yi, out, tol, step):
    """Normalized residuals using the blocked root field."""
    d = rr.shape[0]
    nb = centers.shape[0]
    far = FAR_RATIO * radius
    for j in range(yr.shape[0]):
        x = yr[j]
        y = yi[j]
        b = _block_of(x, y, nb)
        w = complex(x, y) - centers[b]
        fast = abs(w) <= radius
        if fast:
            sn, spn, amin = _near_field(x, y, rr, ri, rptr, ridx, b, -1)
            fast = amin <= (far - radius) ** 2
        if fast:
            sv, sdv = _taylor(rcoef, b, w)
            s = sv + sn
            sp = sdv + spn
        else:
            s_r, s_i, p_r, p_i, t_r, t_i, amin = _field_simple(x, y, rr, ri)
            s = complex(s_r, s_i)
            sp = complex(p_r, p_i)
        if amin == 0.0:
            out[j] = np.inf
            step[j] = np.inf
        else:
            out[j] = _criterion(s, sp, amin, x, y, d, tol)
            step[j] = _newton_size(s, sp)
