"""Build script. The Cython kernel extension is optional: if Cython or a C
compiler is unavailable the install proceeds and fgt falls back to the pure
Python kernels at import time."""

import sys

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
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
        print(f"WARNING: building fgt._kernels failed ({exc}); "
              "falling back to pure-Python kernels", file=sys.stderr)


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("WARNING: Cython not found; skipping compiled kernels",
              file=sys.stderr)
        return []
    ext = Extension("fgt._kernels", ["src/fgt/_kernels.pyx"])
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions(), cmdclass={"build_ext": optional_build_ext})
