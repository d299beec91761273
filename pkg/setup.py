"""Build script for the optional compiled solver kernels.

The Cython extension is optional: when Cython or a C compiler is missing the
package installs without it and the solver falls back to the pure-Python
kernels.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("TODA_TTSTAR_NO_EXT", "") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "toda_ttstar.solver._kernels_c",
                    ["src/toda_ttstar/solver/_kernels_c.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
