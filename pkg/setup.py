"""Build script for the compiled kernel extension.

The extension is optional: if it fails to build or import, the package falls
back to the numpy kernels at runtime (see regiongem._kernels).
"""

import sys

from setuptools import Extension, setup


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError as exc:
        print(f"regiongem: skipping compiled kernels ({exc})", file=sys.stderr)
        return []
    return cythonize(
        [
            Extension(
                "regiongem._kernels._core",
                ["src/regiongem/_kernels/_core.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )


setup(ext_modules=extensions())
