import warnings

import numpy as np
from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None


class optional_build_ext(build_ext):
    """Build the accelerated kernels when a toolchain is present.

    The package is fully functional on the pure-python kernels, so a failed
    extension build downgrades to a warning instead of aborting the install.
    """

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, broken headers, ...
            warnings.warn(f"skipping compiled kernels: {exc}")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"skipping compiled kernel {ext.name}: {exc}")


ext_modules = []
if cythonize is not None:
    ext_modules = cythonize(
        [
            Extension(
                "slicecf.kernels._cykernels",
                ["src/slicecf/kernels/_cykernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
