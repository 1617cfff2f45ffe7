"""Build script: compiles the optional fast kernels.

The package works without the extension (pure-Python kernels are selected
at import time), so a missing compiler or Cython must not break the install.
"""
import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """build_ext that degrades to a warning instead of failing the install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            self._warn(exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            self._warn(exc)

    @staticmethod
    def _warn(exc):
        print(
            f"WARNING: building the triweb._kernels._ckern extension failed "
            f"({exc}); falling back to the pure-Python kernels.",
            file=sys.stderr,
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("WARNING: Cython not available; skipping compiled kernels.",
              file=sys.stderr)
        return []
    ext = Extension(
        "triweb._kernels._ckern",
        sources=["src/triweb/_kernels/_ckern.pyx"],
    )
    return cythonize(
        [ext],
        language_level=3,
        compiler_directives={"boundscheck": False, "wraparound": False,
                             "cdivision": True, "embedsignature": True},
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
