import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("MAXSUMDIV_NO_EXT", "") in ("", "0"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("maxsumdiv._ckernels", ["src/maxsumdiv/_ckernels.pyx"], extra_compile_args=["-O3"])],
            language_level=3,
        )

setup(ext_modules=ext_modules)
