"""Build the optional Cython eigensolver kernel.

The package works without it: ``sepcanon._kernels`` falls back to the
pure-Python implementation when the extension is not importable.
"""
import os

from setuptools import setup

ext_modules = []
if os.environ.get("SEPCANON_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "sepcanon._jacobi",
                    ["src/sepcanon/_jacobi.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
