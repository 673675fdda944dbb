"""Build script: compiles the optional native kernel extension.

The package works without the extension (a pure-NumPy fallback is selected
at import time), so any Cython/compiler failure downgrades to a pure build
instead of aborting the install.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools.extension import Extension

    ext_modules = cythonize(
        [
            Extension(
                "hiersbm.kernels._native",
                ["src/hiersbm/kernels/_native.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - exercised only on broken toolchains
    import sys

    print(f"hiersbm: native kernels disabled ({exc}); installing pure-Python build",
          file=sys.stderr)

setup(ext_modules=ext_modules)
