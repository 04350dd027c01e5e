"""Build script for the optional compiled simplex kernel.

The package works without the extension (a pure numpy kernel is selected at
import time); building it just makes LP solves considerably faster.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "rechain.milp._simplex_cy",
                ["src/rechain/milp/_simplex_cy.pyx"],
                extra_compile_args=["-O2"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython available: install pure-Python only.
    pass

setup(ext_modules=ext_modules)
