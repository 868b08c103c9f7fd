import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("CMC4_PURE_PYTHON", "").strip() in ("", "0"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "cmc4.kernels._ckernels",
                    ["src/cmc4/kernels/_ckernels.pyx"],
                    extra_compile_args=["-O2"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
