"""Builds the optional Cython kernels; the package works without them."""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("SHULGA_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("shulga._kernels",
                       ["src/shulga/_kernels.pyx", "src/shulga/_gmpcore.c"],
                       include_dirs=["src/shulga"],
                       libraries=["gmp"],
                       extra_compile_args=["-O2"])],
            compiler_directives={"language_level": 3},
        )

setup(ext_modules=ext_modules)
