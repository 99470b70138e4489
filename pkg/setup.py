"""Build script for the compiled solver core.

Cython is optional at build time: without it the package installs with the
pure-Python solver only.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [Extension("sagasolve.sat._cdcl", ["src/sagasolve/sat/_cdcl.pyx"],
                   language="c++", extra_compile_args=["-O2"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
