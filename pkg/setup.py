"""Build script: compiles the optional speedup extension when Cython is present.

The package works without the extension; ``mcclink.backend`` falls back to
the pure-Python kernels at import time.  Set MCCLINK_PURE_PYTHON=1 to skip
compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("MCCLINK_PURE_PYTHON"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "mcclink._speedups",
                    ["src/mcclink/_speedups.pyx"],
                    optional=True,
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
