"""Build the optional Cython kernel extension.

The package works without the extension (a pure-Python backend is selected
at import time); building it just makes projected-Hamiltonian construction
much faster.  Skipping the build on purpose:

    SQDKIT_SKIP_EXT=1 pip install -e . --no-build-isolation
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("SQDKIT_SKIP_EXT"):
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "sqdkit._kernels._slater_cy",
                ["src/sqdkit/_kernels/_slater_cy.pyx"],
                include_dirs=[numpy.get_include()],
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

setup(ext_modules=ext_modules)
