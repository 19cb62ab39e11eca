import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

extensions = []
if cythonize is not None:
    extensions = cythonize(
        [
            Extension(
                "photonperm._ryser",
                ["src/photonperm/_ryser.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

# The compiled kernel is optional: photonperm falls back to the pure-Python
# Ryser implementation when the extension is absent.
setup(ext_modules=extensions)
