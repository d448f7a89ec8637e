"""Build script.

The polyline-distance kernel has an optional Cython implementation. If
Cython (or a C compiler) is unavailable the build silently falls back to
the pure-NumPy kernel; `swarmsteer.kernels` picks whichever is importable
at runtime.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "swarmsteer._polyline_c",
                ["src/swarmsteer/_polyline_c.pyx"],
                include_dirs=[np.get_include()],
            )
        ],
        language_level=3,
    )
except Exception:
    ext_modules = []

setup(ext_modules=ext_modules)
