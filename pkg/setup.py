import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("IWT53_NO_EXT"):
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [Extension("iwt53._lift", ["src/iwt53/_lift.pyx"], extra_compile_args=["-O3"])],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
