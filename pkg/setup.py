"""Build script: compiles the optional Cython kernel extension.

The package is fully functional without the extension (a pure-Python
twin of every kernel ships in ``tightwp._termops_py``); a failed
compilation therefore downgrades to a warning instead of aborting the
install.
"""

import warnings

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """build_ext that tolerates a missing/broken C toolchain."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - toolchain dependent
            warnings.warn(f"skipping compiled kernels ({exc}); "
                          "falling back to pure-Python term ops")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - toolchain dependent
            warnings.warn(f"skipping {ext.name} ({exc}); "
                          "falling back to pure-Python term ops")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:  # pragma: no cover - cython not installed
        return []
    return cythonize(
        ["src/tightwp/_termops_cy.pyx"],
        language_level="3",
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
