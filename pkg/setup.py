"""Build the optional Cython kernels; the package falls back to pure Python without them.

The compiled multiplication works on gmpy2's rationals through gmpy2's C-API
and links against the GMP library that gmpy2 itself loads, so only one copy
of GMP is ever in the process.
"""

import glob
import os

from setuptools import Extension, setup


def _extensions():
    try:
        import gmpy2
        from Cython.Build import cythonize
    except ImportError:
        return []
    pkg_dir = os.path.dirname(gmpy2.__file__)
    if not os.path.exists(os.path.join(pkg_dir, "gmpy2.h")):
        return []
    bundled = sorted(glob.glob(os.path.join(pkg_dir, os.pardir, "gmpy2.libs", "libgmp*.so*")))
    if bundled:
        libs = {"extra_objects": [bundled[0]], "runtime_library_dirs": [os.path.dirname(bundled[0])]}
    else:
        libs = {"libraries": ["gmp"]}
    ext = Extension(
        "paracr._kernels._ckernels",
        ["src/paracr/_kernels/_ckernels.pyx"],
        include_dirs=[pkg_dir, os.path.dirname(pkg_dir)],
        extra_compile_args=["-O2"],
        language="c++",
        **libs,
    )
    return cythonize([ext], compiler_directives={"language_level": "3"})


setup(ext_modules=_extensions())
