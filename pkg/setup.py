"""Build hook for the optional compiled correlation kernels.

The package is fully functional without the extension: tfi._kernels falls
back to vectorized numpy implementations when the compiled module is absent
(e.g. no compiler or no Cython at install time).
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/tfi/_kernels/_corr.pyx",
        compiler_directives={"language_level": "3"},
    )
    include_dirs = [numpy.get_include()]
except Exception:  # pragma: no cover - pure-python install path
    include_dirs = []

setup(ext_modules=ext_modules, include_dirs=include_dirs)
