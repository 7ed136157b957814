"""Build script: compiles the Cython kernel when Cython is available.

The extension is optional; without it the package falls back to the
pure-Python kernels with identical results.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "loopplex._kernels._speed",
                ["src/loopplex/_kernels/_speed.pyx"],
                language="c++",
                extra_compile_args=["-O2"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
