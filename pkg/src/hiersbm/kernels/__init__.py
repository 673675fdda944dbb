"""Hot-loop kernels: compiled extension when available, NumPy fallback otherwise.

Both backends expose the same three entry points:

``pg_sample(b, c, rng, exact_max)``
    Polya-Gamma draws, elementwise over integer shapes ``b`` and tilts ``c``.
``gibbs_xi_sweep(...)``
    One sequential Gibbs sweep over community labels (mutates xi/counts/S).
``vb_xi_sweep(...)``
    One sequential coordinate update of community responsibilities.

Set ``HIERSBM_PURE_PYTHON=1`` to force the fallback (used by the benchmark
and by tests that compare the two implementations).
"""

import os

from . import _pure

if os.environ.get("HIERSBM_PURE_PYTHON"):
    backend = _pure
else:
    try:
        from . import _native as backend  # type: ignore[attr-defined]
    except ImportError:
        backend = _pure

BACKEND_NAME = backend.BACKEND_NAME


def get_backend(name=None):
    """Return a kernel backend by name ('native', 'pure', or None=active)."""
    if name is None:
        return backend
    if name == "pure":
        return _pure
    if name == "native":
        from . import _native  # noqa: F811

        return _native
    raise ValueError(f"unknown backend {name!r}")
