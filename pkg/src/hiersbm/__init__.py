"""Two-level stochastic blockmodel inference.

Fits a community / supercommunity blockmodel to simple undirected binary
networks with a Polya-Gamma-augmented Gibbs sampler or a coordinate-ascent
variational optimizer, plus synthetic-data generation, prior diagnostics,
and posterior summaries.
"""

from .kernels import BACKEND_NAME

__version__ = "0.1.0"
__all__ = ["BACKEND_NAME", "__version__"]
