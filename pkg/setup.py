import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("PYFADS_NO_EXT") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [
                Extension(
                    "pyfads.kernels._ckernels",
                    ["src/pyfads/kernels/_ckernels.pyx"],
                    # bit-identical results with the pure-Python kernels; -fno-builtin stops
                    # sin+cos being fused into sincos(), which rounds differently
                    extra_compile_args=["-O2", "-ffp-contract=off", "-fno-fast-math", "-fno-builtin"],
                    libraries=["m"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
