"""Build script: compiles the optional trajectory kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compile downgrades to a warning rather than
aborting the install.
"""
import sys

from setuptools import setup, Extension

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - build environment without Cython
    cythonize = None

ext_modules = []
if cythonize is not None:
    ext = Extension(
        "spikeflow._kernels",
        sources=["src/spikeflow/_kernels.pyx"],
        optional=True,
    )
    try:
        ext_modules = cythonize(
            [ext],
            language_level=3,
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except Exception as exc:  # pragma: no cover
        print(f"warning: skipping compiled kernels ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
