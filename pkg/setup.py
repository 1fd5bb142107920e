"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a numpy fallback is selected at
import time), so a failed compile only costs speed.  Set EFFECTALG_NO_EXT=1
to skip the extension build entirely.
"""

import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext
from setuptools.extension import Extension


class optional_build_ext(build_ext):
    """Swallow compiler failures; the pure-python backend remains usable."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or toolchain missing
            print(f"warning: extension build skipped ({exc})", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "falling back to the pure-python kernels", file=sys.stderr)


def extension_modules():
    if os.environ.get("EFFECTALG_NO_EXT"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        print(f"warning: {exc}; building without the compiled kernels",
              file=sys.stderr)
        return []
    ext = Extension(
        "effectalg._kernels_cy",
        sources=["src/effectalg/_kernels_cy.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


setup(
    ext_modules=extension_modules(),
    cmdclass={"build_ext": optional_build_ext},
)
