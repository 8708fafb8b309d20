"""Build hook for the optional compiled kernels.

The package works without the extension (isoexplore.kernels falls back to the
pure-Python twin), so a failed cythonize must not break installation.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "isoexplore._kernels",
                ["src/isoexplore/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
