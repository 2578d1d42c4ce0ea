import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "permprofile.kernels._ccount",
                ["src/permprofile/kernels/_ccount.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
else:
    # pure-Python install still works; the package falls back to the
    # interpreted counting kernel at import time
    ext_modules = []

setup(ext_modules=ext_modules)
