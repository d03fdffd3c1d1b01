import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

# The compiled kernel is optional: without a C toolchain the package falls
# back to the pure-Python implementation in acdaa._core_py.
if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "acdaa._core",
                ["src/acdaa/_core.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
else:
    extensions = []

setup(ext_modules=extensions)
