"""Build script: compiles the optional speedup extension.

The package works without the extension (a pure-Python fallback is
selected at import time); set CITENET_NO_EXT=1 to skip compilation.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Swallow compiler failures so the pure-Python install still works."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # pragma: no cover - depends on toolchain
            print(f"warning: skipping compiled kernels ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # pragma: no cover - depends on toolchain
            print(f"warning: could not build {ext.name} ({exc})")


ext_modules = []
cmdclass = {}
if os.environ.get("CITENET_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "citenet._kern._speedups",
                    sources=["src/citenet/_kern/_speedups.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
        cmdclass = {"build_ext": optional_build_ext}
    except ImportError:
        pass

setup(ext_modules=ext_modules, cmdclass=cmdclass)
