"""Build script: compiles the optional sequence-kernel extension.

The extension is a speedup only; if compilation fails the package installs
anyway and falls back to the pure-Python kernels at import time.
"""

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible, warn and continue otherwise."""

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
        import warnings

        warnings.warn(
            f"building the compiled sequence kernels failed ({exc!r}); "
            "falling back to the pure-Python implementation"
        )


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    from setuptools import Extension

    return cythonize(
        [
            Extension(
                "faithbench.lexical._seqext",
                ["src/faithbench/lexical/_seqext.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level="3",
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
