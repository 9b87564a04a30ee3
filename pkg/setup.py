"""Build script.

The only compiled piece is the oracle's enumeration kernel.  It is optional:
if Cython or a C compiler is missing the package installs anyway and falls
back to the pure-Python kernel at import time.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("ORBINT_PURE") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "orbint.oracle._kernel",
                    ["src/orbint/oracle/_kernel.pyx"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
