# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled hot kernels: Polya-Gamma sampling and sequential label sweeps.

Mirrors the algorithms in ``_pure`` (same proposal construction and series
truncation) but consumes the numpy bit generator directly, so the random
streams of the two backends differ; agreement is distributional, not bitwise.
"""

import numpy as np

cimport numpy as cnp
from cpython.pycapsule cimport PyCapsule_GetPointer
from libc.math cimport M_PI, cosh, erfc, exp, fabs, log, sinh, sqrt, tanh
from numpy.random cimport bitgen_t

cnp.import_array()

BACKEND_NAME = "native"

cdef double TRUNC = 0.64  # series crossing point of the alternating bound


cdef inline double next_double(bitgen_t *bg) noexcept:
    return bg.next_double(bg.state)


cdef inline double rexp(bitgen_t *bg) noexcept:
    return -log(1.0 - next_double(bg))


cdef inline double rnorm(bitgen_t *bg) noexcept:
    cdef double u, v, s
    while True:
        u = 2.0 * next_double(bg) - 1.0
        v = 2.0 * next_double(bg) - 1.0
        s = u * u + v * v
        if 0.0 < s < 1.0:
            return u * sqrt(-2.0 * log(s) / s)


cdef inline double norm_cdf(double x) noexcept:
    return 0.5 * erfc(-x / sqrt(2.0))


cdef double pigauss_factor(double z) noexcept:
    """2 exp(-z) P(IG(1/z,1) <= TRUNC), with an asymptotic guard for large z."""
    cdef double t = TRUNC
    cdef double rt = sqrt(t)
    cdef double a = (t * z + 1.0) / rt
    cdef double b = (t * z - 1.0) / rt
    cdef double term1 = norm_cdf(b)
    cdef double term2, ex
    if a < 37.0:
        term2 = exp(2.0 * z) * norm_cdf(-a)
    else:
        ex = 2.0 * z - 0.5 * a * a
        term2 = exp(ex) / (a * sqrt(2.0 * M_PI)) * (1.0 - 1.0 / (a * a))
    return 2.0 * exp(-z) * (term1 + term2)


cdef inline double series_coef(int n, double x) noexcept:
    cdef double h = n + 0.5
    if x > TRUNC:
        return M_PI * h * exp(-h * h * M_PI * M_PI * x / 2.0)
    return M_PI * h * pow_3_2(2.0 / (M_PI * x)) * exp(-2.0 * h * h / x)


cdef inline double pow_3_2(double v) noexcept:
    return v * sqrt(v)


cdef double rtigauss(bitgen_t *bg, double z) noexcept:
    cdef double t = TRUNC
    cdef double e1, e2, x, mu, y, muy
    if z * t < 1.0:
        while True:
            while True:
                e1 = rexp(bg)
                e2 = rexp(bg)
                if e1 * e1 <= 2.0 * e2 / t:
                    break
            x = t / ((1.0 + t * e1) * (1.0 + t * e1))
            if z == 0.0 or next_double(bg) <= exp(-0.5 * z * z * x):
                return x
    mu = 1.0 / z
    while True:
        y = rnorm(bg)
        y = y * y
        muy = mu * y
        x = mu + 0.5 * mu * muy - 0.5 * mu * sqrt(muy * (4.0 + muy))
        if next_double(bg) > mu / (mu + x):
            x = mu * mu / x
        if x <= t:
            return x


cdef double pg1_draw(bitgen_t *bg, double c) noexcept:
    cdef double z = fabs(c) / 2.0
    cdef double t = TRUNC
    cdef double rate = M_PI * M_PI / 8.0 + z * z / 2.0
    cdef double p = M_PI / (2.0 * rate) * exp(-rate * t)
    cdef double q = pigauss_factor(z)
    cdef double p_tail = p / (p + q)
    cdef double x, s, y
    cdef int n
    while True:
        if next_double(bg) < p_tail:
            x = t + rexp(bg) / rate
        else:
            x = rtigauss(bg, z)
        s = series_coef(0, x)
        y = next_double(bg) * s
        n = 0
        while True:
            n += 1
            if n % 2 == 1:
                s -= series_coef(n, x)
                if y <= s:
                    return x / 4.0
            else:
                s += series_coef(n, x)
                if y > s:
                    break


cdef inline double pg_mean_c(double b, double c) noexcept:
    if fabs(c) < 1e-6:
        return b * (0.25 - c * c / 48.0)
    return b / (2.0 * c) * tanh(c / 2.0)


cdef inline double pg_var_c(double b, double c) noexcept:
    cdef double ratio
    if fabs(c) < 1e-4:
        ratio = 1.0 / 6.0 + c * c / 120.0
    else:
        ratio = (sinh(c) - c) / (c * c * c)
    return b / 4.0 * ratio / (cosh(c / 2.0) * cosh(c / 2.0))


cdef inline bitgen_t *get_bitgen(object rng):
    capsule = rng.bit_generator.capsule
    return <bitgen_t *> PyCapsule_GetPointer(capsule, "BitGenerator")


def pg_sample(cnp.int64_t[::1] b, cnp.float64_t[::1] c, object rng, int exact_max=50):
    """Elementwise PG(b_i, c_i); b = 0 gives exactly 0."""
    cdef bitgen_t *bg = get_bitgen(rng)
    cdef Py_ssize_t n = b.shape[0]
    out_arr = np.zeros(n, dtype=np.float64)
    cdef cnp.float64_t[::1] out = out_arr
    cdef Py_ssize_t i
    cdef long long bi
    cdef int r
    cdef double ci, total, m, sd
    for i in range(n):
        bi = b[i]
        if bi == 0:
            continue
        ci = c[i]
        if bi <= exact_max:
            total = 0.0
            for r in range(bi):
                total += pg1_draw(bg, ci)
            out[i] = total
        else:
            m = pg_mean_c(bi, ci)
            sd = sqrt(pg_var_c(bi, ci))
            total = m + sd * rnorm(bg)
            out[i] = total if total > 1e-12 else 1e-12
    return out_arr


def gibbs_xi_sweep(cnp.int64_t[::1] xi, cnp.int64_t[::1] nk,
                   cnp.int64_t[:, ::1] S,
                   cnp.float64_t[:, ::1] theta, cnp.float64_t[:, ::1] lpe,
                   cnp.float64_t[::1] logw,
                   cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices,
                   object rng, object order=None):
    """One sequential Gibbs sweep over community labels (mutates xi, nk, S)."""
    cdef bitgen_t *bg = get_bitgen(rng)
    cdef Py_ssize_t I = xi.shape[0]
    cdef Py_ssize_t K = nk.shape[0]
    scratch_e = np.zeros(K, dtype=np.float64)
    scratch_lw = np.empty(K, dtype=np.float64)
    cdef cnp.float64_t[::1] ecnt = scratch_e
    cdef cnp.float64_t[::1] lw = scratch_lw
    cdef cnp.int64_t[::1] scan
    if order is None:
        scan = np.arange(I, dtype=np.int64)
    else:
        scan = np.ascontiguousarray(order, dtype=np.int64)
    cdef Py_ssize_t si, i, ptr, k, l
    cdef long long old, new, lab
    cdef double acc, maxlw, tot, u, cum
    for si in range(I):
        i = scan[si]
        old = xi[i]
        nk[old] -= 1
        for ptr in range(indptr[i], indptr[i + 1]):
            lab = xi[indices[ptr]]
            S[old, lab] -= 1
            if lab != old:
                S[lab, old] -= 1
            ecnt[lab] += 1.0
        maxlw = -1e300
        for k in range(K):
            acc = logw[k]
            for l in range(K):
                acc += ecnt[l] * theta[k, l] - nk[l] * lpe[k, l]
            lw[k] = acc
            if acc > maxlw:
                maxlw = acc
        tot = 0.0
        for k in range(K):
            lw[k] = exp(lw[k] - maxlw)
            tot += lw[k]
        u = next_double(bg) * tot
        cum = 0.0
        new = K - 1
        for k in range(K):
            cum += lw[k]
            if u <= cum:
                new = k
                break
        xi[i] = new
        nk[new] += 1
        for ptr in range(indptr[i], indptr[i + 1]):
            lab = xi[indices[ptr]]
            S[new, lab] += 1
            if lab != new:
                S[lab, new] += 1
            ecnt[lab] = 0.0


def vb_xi_sweep(cnp.float64_t[:, ::1] pi, cnp.float64_t[::1] logpsi,
                cnp.float64_t[:, ::1] mtab, cnp.float64_t[:, ::1] atab,
                cnp.int64_t[::1] indptr, cnp.int64_t[::1] indices,
                double floor=1e-12):
    """One sequential responsibility sweep (mutates pi)."""
    cdef Py_ssize_t I = pi.shape[0]
    cdef Py_ssize_t K = pi.shape[1]
    total_arr = np.asarray(pi).sum(axis=0)
    cdef cnp.float64_t[::1] total = total_arr
    edge_arr = np.zeros(K, dtype=np.float64)
    oth_arr = np.zeros(K, dtype=np.float64)
    lw_arr = np.zeros(K, dtype=np.float64)
    cdef cnp.float64_t[::1] edge = edge_arr
    cdef cnp.float64_t[::1] others = oth_arr
    cdef cnp.float64_t[::1] lw = lw_arr
    cdef Py_ssize_t i, ptr, j, k, l
    cdef double acc, maxlw, tot, val
    for i in range(I):
        for k in range(K):
            others[k] = total[k] - pi[i, k]
            edge[k] = 0.0
        for ptr in range(indptr[i], indptr[i + 1]):
            j = indices[ptr]
            for k in range(K):
                edge[k] += pi[j, k]
        maxlw = -1e300
        for k in range(K):
            acc = logpsi[k]
            for l in range(K):
                acc += mtab[k, l] * edge[l] - atab[k, l] * others[l]
            lw[k] = acc
            if acc > maxlw:
                maxlw = acc
        tot = 0.0
        for k in range(K):
            lw[k] = exp(lw[k] - maxlw)
            tot += lw[k]
        for k in range(K):
            val = lw[k] / tot
            if val < floor:
                val = floor
            lw[k] = val
        tot = 0.0
        for k in range(K):
            tot += lw[k]
        for k in range(K):
            val = lw[k] / tot
            total[k] += val - pi[i, k]
            pi[i, k] = val
