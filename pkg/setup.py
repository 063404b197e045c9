"""Build script for the optional compiled kernels.

If Cython or a compiler is unavailable the package still installs and uses the
NumPy fallback in ``maxmult._pykernels``.
"""

from setuptools import setup

try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "maxmult._ckernels",
                ["src/maxmult/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
