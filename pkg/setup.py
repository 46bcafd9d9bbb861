"""Build hook for the optional compiled kernel extension.

The package is pure Python by default; if Cython and a C compiler are
available the hot pixel kernels are compiled, otherwise installation
proceeds with the numpy fallback selected at import time.

-ffp-contract=off keeps the compiled convolution bit-identical to the
numpy fallback (no FMA contraction).
"""

from setuptools import Extension, setup

ext_modules = []
include_dirs = []
try:
    import numpy
    from Cython.Build import cythonize

    ext = Extension(
        "comicgen.kernels._native",
        sources=["src/comicgen/kernels/_native.pyx"],
        include_dirs=[numpy.get_include()],
        extra_compile_args=["-O2", "-ffp-contract=off"],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    ext_modules = cythonize([ext], language_level="3")
except Exception:
    pass

setup(ext_modules=ext_modules)
