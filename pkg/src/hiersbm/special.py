"""Special functions and random variate helpers shared by both engines.

digamma/trigamma are implemented with a recurrence shift into the asymptotic
regime followed by a Bernoulli-coefficient series; they are exercised by the
concentration-parameter formulas and every variational update, so accuracy
targets are tight (1e-10 / 1e-8 relative).

All samplers draw from a ``numpy.random.Generator``; one generator per
chain/restart, derived from a master seed by stream index, keeps parallel
runs reproducible.
"""

from __future__ import annotations

import numpy as np

from .kernels import backend as _backend

# asymptotic series coefficients: B_2n / (2n) for digamma
_DIGAMMA_COEF = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)
# B_2n for trigamma
_TRIGAMMA_COEF = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
)
_SHIFT = 8.0


def digamma(x):
    """Digamma function for x > 0 (scalar or array)."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0.0):
        raise ValueError("digamma requires x > 0")
    scalar = x.ndim == 0
    x = np.atleast_1d(x).copy()
    acc = np.zeros_like(x)
    # recurrence psi(x) = psi(x+1) - 1/x until x >= _SHIFT
    while True:
        small = x < _SHIFT
        if not small.any():
            break
        acc[small] -= 1.0 / x[small]
        x[small] += 1.0
    inv2 = 1.0 / (x * x)
    series = np.zeros_like(x)
    power = inv2.copy()
    for c in _DIGAMMA_COEF:
        series += c * power
        power *= inv2
    out = acc + np.log(x) - 0.5 / x - series
    return float(out[0]) if scalar else out


def trigamma(x):
    """Trigamma function for x > 0 (scalar or array)."""
    x = np.asarray(x, dtype=np.float64)
    if np.any(x <= 0.0):
        raise ValueError("trigamma requires x > 0")
    scalar = x.ndim == 0
    x = np.atleast_1d(x).copy()
    acc = np.zeros_like(x)
    while True:
        small = x < _SHIFT
        if not small.any():
            break
        acc[small] += 1.0 / (x[small] * x[small])
        x[small] += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = np.zeros_like(x)
    power = inv * inv2
    for c in _TRIGAMMA_COEF:
        series += c * power
        power *= inv2
    out = acc + inv + 0.5 * inv2 + series
    return float(out[0]) if scalar else out


def log1pexp(x):
    """Numerically stable log(1 + exp(x))."""
    return np.logaddexp(0.0, x)


def sigmoid(x):
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out if out.ndim else float(out)


def make_streams(master_seed, count):
    """Independent reproducible generators: one per chain/restart."""
    seq = np.random.SeedSequence(master_seed)
    return [np.random.Generator(np.random.PCG64(c)) for c in seq.spawn(count)]


def sample_categorical_log(log_weights, rng):
    """Draw an index with probability softmax(log_weights), in log space."""
    lw = np.asarray(log_weights, dtype=np.float64)
    m = np.max(lw)
    if not np.isfinite(m):
        raise ValueError("all categorical log-weights are -inf")
    p = np.exp(lw - m)
    total = p.sum()
    u = rng.random() * total
    return int(np.searchsorted(np.cumsum(p), u, side="right").clip(0, lw.size - 1))


def sample_dirichlet(conc, rng):
    conc = np.asarray(conc, dtype=np.float64)
    if np.any(conc <= 0):
        raise ValueError("Dirichlet concentration must be positive")
    g = rng.gamma(conc, 1.0)
    s = g.sum()
    if s <= 0.0:
        # all shapes tiny: fall back to a one-hot on the largest draw
        out = np.zeros_like(conc)
        out[int(rng.integers(conc.size))] = 1.0
        return out
    return g / s


def sample_gamma(shape, rate, rng):
    if shape <= 0 or rate <= 0:
        raise ValueError("Gamma shape and rate must be positive")
    return rng.gamma(shape, 1.0 / rate)


def sample_inverse_gamma(shape, rate, rng):
    """X ~ IG(a, b)  <=>  1/X ~ Gamma(a, rate=b)."""
    return 1.0 / sample_gamma(shape, rate, rng)


def sample_normal(mean, variance, rng):
    if variance < 0:
        raise ValueError("variance must be nonnegative")
    return mean + np.sqrt(variance) * rng.standard_normal()


def pg_mean(b, c):
    """E[PG(b, c)] = b/(2c) tanh(c/2), with the b/4 limit at c = 0."""
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    small = np.abs(c) < 1e-6
    cs = np.where(small, 1.0, c)
    out = np.where(small, b * (0.25 - c * c / 48.0),
                   b / (2.0 * cs) * np.tanh(cs / 2.0))
    return out if out.ndim else float(out)


def pg_var(b, c):
    """Var[PG(b, c)] = b (sinh c - c) / (4 c^3 cosh^2(c/2)); b/24 at c = 0."""
    b = np.asarray(b, dtype=np.float64)
    c = np.asarray(c, dtype=np.float64)
    small = np.abs(c) < 1e-4
    cs = np.where(small, 1.0, c)
    ratio = np.where(small, 1.0 / 6.0 + c * c / 120.0,
                     (np.sinh(cs) - cs) / cs ** 3)
    out = b / 4.0 * ratio / np.cosh(c / 2.0) ** 2
    return out if out.ndim else float(out)


def sample_pg(b, c, rng, exact_max=50):
    """Draw Polya-Gamma PG(b, c) variates for integer b >= 0.

    b = 0 returns exactly 0 (the degenerate PG(0, .), which arises for empty
    block pairs).  Integer b <= exact_max uses a sum of exact Devroye draws;
    larger b falls back to a moment-matched Gaussian, with the error
    controlled by the CLT.
    """
    scalar = np.isscalar(b) and np.isscalar(c)
    b_arr = np.atleast_1d(np.asarray(b, dtype=np.int64))
    c_arr = np.atleast_1d(np.asarray(c, dtype=np.float64))
    b_arr, c_arr = np.broadcast_arrays(b_arr, c_arr)
    if (b_arr < 0).any():
        raise ValueError("PG requires b >= 0")
    out = _backend.pg_sample(np.ascontiguousarray(b_arr),
                             np.ascontiguousarray(c_arr), rng, int(exact_max))
    return float(out[0]) if scalar else out
