from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "schemalat._ckernels",
                ["src/schemalat/_ckernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    # No Cython: the package still works on the pure-Python kernels.
    ext_modules = None

setup(ext_modules=ext_modules)
