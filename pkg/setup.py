"""Build script: compiles the optional Cython kernels when possible."""

import os

from setuptools import Extension, setup


def extensions():
    if os.environ.get("LITTLEWOOD_PURE_PYTHON"):
        return []
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "littlewood_lab._ckernels",
        ["src/littlewood_lab/_ckernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O2", "-fno-fast-math", "-ffp-contract=off"],
    )
    return cythonize([ext], language_level=3, quiet=True)


setup(ext_modules=extensions())
