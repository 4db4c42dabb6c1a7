"""Build the optional Cython core.

If the extension cannot be compiled the package still installs and falls back
to the numpy implementations in ``zetacorr._fallback``.
"""
import os
import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext

try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:  # pragma: no cover - build without the core
    ext_modules = []
else:
    use_openmp = os.environ.get("ZETACORR_OPENMP", "1") != "0" and sys.platform.startswith("linux")
    omp = ["-fopenmp"] if use_openmp else []
    ext_modules = cythonize(
        [
            Extension(
                "zetacorr._core",
                ["src/zetacorr/_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"] + omp,
                extra_link_args=omp,
            )
        ],
        compiler_directives={"language_level": 3},
    )


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover
            print(f"warning: zetacorr._core not built ({exc}); using numpy fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover
            print(f"warning: {ext.name} not built ({exc}); using numpy fallback")


setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
