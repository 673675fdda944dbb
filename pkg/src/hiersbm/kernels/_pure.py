"""Pure-NumPy reference implementation of the hot kernels.

Correct but slow: the Polya-Gamma sampler loops draw-by-draw and the label
sweeps loop vertex-by-vertex.  The compiled extension mirrors the same
algorithms; see ``benchmarks/bench_kernels.py`` for the throughput gap.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import log_ndtr

BACKEND_NAME = "pure"

# Devroye-style alternating-series sampler for PG(1, c).  The proposal mixes
# a truncated inverse-Gaussian body with an exponential tail; TRUNC is the
# series crossing point (~0.64) at which the two coefficient forms meet.
_TRUNC = 0.64


def _pigauss_cdf_factor(z):
    """q-branch mass: 2 exp(-z) P(IG(1/z, 1) <= TRUNC), stable for large z."""
    t = _TRUNC
    rt = math.sqrt(t)
    a = (t * z + 1.0) / rt
    b = (t * z - 1.0) / rt
    # log of exp(2z) * Phi(-a); exponents combined to avoid overflow
    term2 = math.exp(2.0 * z + log_ndtr(-a))
    term1 = 0.5 * math.erfc(-b / math.sqrt(2.0))
    return 2.0 * math.exp(-z) * (term1 + term2)


def _series_coef(n, x):
    if x > _TRUNC:
        return math.pi * (n + 0.5) * math.exp(-((n + 0.5) ** 2) * math.pi ** 2 * x / 2.0)
    return (math.pi * (n + 0.5) * (2.0 / (math.pi * x)) ** 1.5
            * math.exp(-2.0 * (n + 0.5) ** 2 / x))


def _rtigauss(z, rng):
    """Inverse-Gaussian(1/z, 1) truncated to (0, TRUNC]."""
    t = _TRUNC
    if z * t < 1.0:  # mean above the truncation point: stable-tail proposal
        while True:
            while True:
                e1 = rng.exponential()
                e2 = rng.exponential()
                if e1 * e1 <= 2.0 * e2 / t:
                    break
            x = t / (1.0 + t * e1) ** 2
            if z == 0.0 or rng.random() <= math.exp(-0.5 * z * z * x):
                return x
    mu = 1.0 / z
    while True:
        y = rng.standard_normal() ** 2
        muy = mu * y
        x = mu + 0.5 * mu * muy - 0.5 * mu * math.sqrt(muy * (4.0 + muy))
        if rng.random() > mu / (mu + x):
            x = mu * mu / x
        if x <= t:
            return x


def pg1_draw(c, rng):
    """One exact PG(1, c) draw."""
    z = abs(c) / 2.0
    t = _TRUNC
    rate = math.pi ** 2 / 8.0 + z * z / 2.0
    p = math.pi / (2.0 * rate) * math.exp(-rate * t)
    q = _pigauss_cdf_factor(z)
    p_tail = p / (p + q)
    while True:
        if rng.random() < p_tail:
            x = t + rng.exponential() / rate
        else:
            x = _rtigauss(z, rng)
        s = _series_coef(0, x)
        y = rng.random() * s
        n = 0
        while True:
            n += 1
            if n % 2 == 1:
                s -= _series_coef(n, x)
                if y <= s:
                    return x / 4.0
            else:
                s += _series_coef(n, x)
                if y > s:
                    break


def pg_sample(b, c, rng, exact_max=50):
    """Elementwise PG(b_i, c_i); b = 0 gives exactly 0."""
    b = np.asarray(b, dtype=np.int64)
    c = np.asarray(c, dtype=np.float64)
    out = np.zeros(b.shape, dtype=np.float64)
    flat_b = b.ravel()
    flat_c = c.ravel()
    flat_o = out.ravel()
    for idx in range(flat_b.size):
        bi = int(flat_b[idx])
        if bi == 0:
            continue
        ci = float(flat_c[idx])
        if bi <= exact_max:
            total = 0.0
            for _ in range(bi):
                total += pg1_draw(ci, rng)
            flat_o[idx] = total
        else:
            m = _pg_mean(bi, ci)
            sd = math.sqrt(_pg_var(bi, ci))
            flat_o[idx] = max(m + sd * rng.standard_normal(), 1e-12)
    return out


def _pg_mean(b, c):
    if abs(c) < 1e-6:
        return b * (0.25 - c * c / 48.0)
    return b / (2.0 * c) * math.tanh(c / 2.0)


def _pg_var(b, c):
    if abs(c) < 1e-4:
        ratio = 1.0 / 6.0 + c * c / 120.0
    else:
        ratio = (math.sinh(c) - c) / c ** 3
    return b / 4.0 * ratio / math.cosh(c / 2.0) ** 2


def gibbs_xi_sweep(xi, nk, S, theta, log1pexp_theta, logw, indptr, indices, rng,
                   order=None):
    """One sequential Gibbs sweep over community labels.

    Mutates ``xi`` (labels), ``nk`` (block sizes) and ``S`` (full symmetric
    edge-count matrix with within-block counts on the diagonal).  ``theta``
    and ``log1pexp_theta`` are full symmetric (K, K) tables frozen for the
    sweep; ``logw`` holds log mixture weights.
    """
    K = nk.shape[0]
    I = xi.shape[0]
    scan = range(I) if order is None else order
    cnt = np.empty(K, dtype=np.float64)
    for i in scan:
        old = int(xi[i])
        nbrs = indices[indptr[i]:indptr[i + 1]]
        nbr_labels = xi[nbrs]
        # detach vertex i
        nk[old] -= 1
        for l in nbr_labels:
            S[old, l] -= 1
            if l != old:
                S[l, old] -= 1
        cnt[:] = nk
        edge_cnt = np.bincount(nbr_labels, minlength=K).astype(np.float64)
        lw = logw + edge_cnt @ theta - cnt @ log1pexp_theta
        m = lw.max()
        p = np.exp(lw - m)
        new = int(np.searchsorted(np.cumsum(p), rng.random() * p.sum(),
                                  side="right").clip(0, K - 1))
        xi[i] = new
        nk[new] += 1
        for l in nbr_labels:
            S[new, l] += 1
            if l != new:
                S[l, new] += 1


def vb_xi_sweep(pi, logpsi, mtab, atab, indptr, indices, floor=1e-12):
    """One sequential coordinate-ascent pass over community responsibilities.

    ``mtab``/``atab`` are full symmetric (K, K) tables of variational means
    and expected softplus values frozen for the sweep; newest neighbor
    responsibilities are used as the pass progresses.  Mutates ``pi``.
    """
    I, K = pi.shape
    total = pi.sum(axis=0)
    for i in range(I):
        nbrs = indices[indptr[i]:indptr[i + 1]]
        others = total - pi[i]
        edge_mass = pi[nbrs].sum(axis=0) if nbrs.size else np.zeros(K)
        lw = logpsi + mtab @ edge_mass - atab @ others
        lw -= lw.max()
        row = np.exp(lw)
        row /= row.sum()
        np.clip(row, floor, None, out=row)
        row /= row.sum()
        total += row - pi[i]
        pi[i] = row
