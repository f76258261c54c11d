# Usage for an in-place kernel build: python setup.py build_ext --inplace
#
# The compiled kernels are optional: if Cython or a C compiler is missing the
# package installs anyway and falls back to the NumPy kernels at import time.

import warnings

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    directives = {
        "language_level": "3",
        "boundscheck": False,
        "wraparound": False,
        "cdivision": True,
        "initializedcheck": False,
    }
    ext_modules = cythonize(
        [
            Extension(
                "lowdefault._kernels._core",
                ["src/lowdefault/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
                include_dirs=[numpy.get_include()],
            )
        ],
        compiler_directives=directives,
    )
except Exception as exc:  # pragma: no cover - degraded build environment
    warnings.warn(f"building without compiled kernels: {exc}")

setup(ext_modules=ext_modules)
