"""Build script for the optional compiled kernel module.

The package is fully functional without the extension: ``cfrefine.backend``
falls back to the pure-Python kernels when ``cfrefine._cfcore`` is absent.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "cfrefine._cfcore",
                sources=["src/cfrefine/_cfcore.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level="3",
    )

setup(ext_modules=ext_modules)
