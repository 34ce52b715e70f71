import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

try:
    from numpy import get_include as numpy_get_include
except ImportError:
    numpy_get_include = None

ext_modules = []
if cythonize is not None and numpy_get_include is not None and not os.environ.get("FAIRUSE_SKIP_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "fairuse._ckernels",
                ["src/fairuse/_ckernels.pyx"],
                include_dirs=[numpy_get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

# The package works without the extension: fairuse.kernels falls back to the
# numpy implementation when fairuse._ckernels is absent.
setup(ext_modules=ext_modules)
