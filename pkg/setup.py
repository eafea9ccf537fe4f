"""Build hook for the optional compiled Smith normal form kernel.

The package works without the extension; homology then runs on the pure
Python kernel selected at import time in orbkit.smith.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Skip the extension instead of failing the whole install."""

    def run(self):
        try:
            super().run()
        except Exception as exc:
            warnings.warn("skipping compiled SNF kernel: %s" % exc)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn("skipping %s: %s" % (ext.name, exc))


try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("orbkit._smithc", ["src/orbkit/_smithc.pyx"])],
        language_level=3,
    )
except Exception as exc:  # Cython unavailable: install pure Python only
    warnings.warn("building without the compiled SNF kernel: %s" % exc)
    ext_modules = []

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
