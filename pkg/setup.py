"""Build hook for the optional compiled kernels.

The package is pure Python unless Cython is available at build time; the
runtime falls back to the numpy kernels when the extension is missing.
Set DISCPLAN_PURE=1 to force a pure build.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("DISCPLAN_PURE"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("discplan._kernels_c",
                       ["src/discplan/_kernels_c.pyx"])],
            language_level=3,
        )

setup(ext_modules=ext_modules)
