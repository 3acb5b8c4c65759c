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
                "cavring.kernels._core",
                ["src/cavring/kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
                # -ffp-contract=off keeps the compiled kernel numerically
                # aligned with the numpy fallback (no FMA contraction).
                extra_compile_args=["-O3", "-ffp-contract=off"],
                define_macros=[
                    ("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION"),
                    ("_GNU_SOURCE", "1"),  # sincos
                ],
            )
        ],
        language_level=3,
    )
else:
    # The package still works without the compiled kernel: the numpy
    # fallback is selected at import time.
    ext_modules = []

setup(ext_modules=ext_modules)
