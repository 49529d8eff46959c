"""Build script for the optional compiled alignment kernels.

The package works without the extension: seqskill.softdtw falls back to a
pure-numpy kernel at import time if the compiled module is unavailable.
"""

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Build the extension if possible, otherwise install pure-Python only."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            print(f"seqskill: skipping compiled kernels ({exc}); "
                  "pure-Python fallback will be used")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"seqskill: failed to build {ext.name} ({exc}); "
                  "pure-Python fallback will be used")


def make_extensions():
    import numpy
    from Cython.Build import cythonize

    ext = Extension(
        "seqskill.softdtw._kernels_cy",
        sources=["src/seqskill/softdtw/_kernels_cy.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O3"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    return cythonize(
        [ext],
        compiler_directives={
            "language_level": 3,
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )


setup(ext_modules=make_extensions(), cmdclass={"build_ext": OptionalBuildExt})
