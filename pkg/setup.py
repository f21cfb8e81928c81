import os

from setuptools import Extension, setup

# The compiled linkage kernel is an optional speedup; the package falls back
# to the pure-Python implementation when the extension is missing.
ext_modules = []
if os.environ.get("SDCLAB_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize

        ext = Extension(
            "sdclab._kernels._linkage",
            ["src/sdclab/_kernels/_linkage.pyx"],
            # -O2 only: no -ffast-math / -march=native, the kernel must stay
            # bit-identical to the pure-Python fallback.
            extra_compile_args=["-O2"],
        )
        ext.optional = True
        ext_modules = cythonize([ext], compiler_directives={"language_level": "3"})
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
