"""Build script. The structure-function kernel compiles to a C extension
when Cython is available; without it the package falls back to the pure
Python kernel at import time, so the extension is strictly optional.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/ftcad/_kernel.pyx"],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
