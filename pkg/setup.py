"""Build script: compiles the optional grouping kernel.

The package is fully functional without the extension (a numpy fallback is
selected at import time), so a failed compile only costs speed.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("minkey._groupfast", ["src/minkey/_groupfast.pyx"])],
        language_level="3",
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
