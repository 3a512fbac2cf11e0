"""Build script: compiles the optional scanning-kernel extension.

The package is fully functional without the extension (a pure-Python
kernel with the same contract is selected at import time), so build
failures degrade to a warning instead of aborting the install.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/abssep/_fastscan.pyx"],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except Exception as exc:  # noqa: BLE001
    print(f"warning: skipping compiled kernel ({exc}); "
          "pure-Python fallback will be used", file=sys.stderr)

setup(ext_modules=ext_modules)
