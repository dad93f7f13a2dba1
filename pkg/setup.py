# Builds the optional compiled core; the package falls back to numpy if it is absent.
from setuptools import setup

ext_modules = []
try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension
except ImportError:
    pass
else:
    ext_modules = cythonize(
        [
            Extension(
                "fourier_uncertainty._ckernels",
                ["src/fourier_uncertainty/_ckernels.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3", "cdivision": True,
                             "boundscheck": False, "wraparound": False},
    )

setup(ext_modules=ext_modules)
