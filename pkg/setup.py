"""Build script for the optional compiled simulation kernel.

The package works without the extension (a pure-Python kernel is selected
at import time); set WINDBENCH_NO_EXT=1 to skip compilation entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("WINDBENCH_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "windbench._kernel_cy",
                    ["src/windbench/_kernel_cy.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )

setup(ext_modules=ext_modules)
