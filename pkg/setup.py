from setuptools import Extension, setup
from Cython.Build import cythonize

ext = Extension(
    "ibmap._kernels._ckernels",
    ["src/ibmap/_kernels/_ckernels.pyx"],
    extra_compile_args=["-O3"],
)

setup(ext_modules=cythonize([ext], language_level=3))
