"""Optional compiled-kernel build.

The package is pure Python with a numpy fallback; when Cython and a C
compiler are present, `python setup.py build_ext --inplace` (or a normal
pip install without build isolation) compiles the hot counting kernels.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("cdu._ddtcore", ["src/cdu/_ddtcore.pyx"],
                   extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
