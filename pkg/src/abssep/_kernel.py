"""Kernel selection for the search fast pass.

The compiled extension is preferred; the pure-Python kernel implements
the identical contract and is used when the extension has not been
built.  ``KERNEL_BACKEND`` records which one is active.
"""

from __future__ import annotations

try:
    from . import _fastscan as _impl
    KERNEL_BACKEND = "compiled"
except ImportError:          # pragma: no cover - depends on build
    from . import _scan_py as _impl
    KERNEL_BACKEND = "python"

from . import _scan_py

scan_slice = _impl.scan_slice
scan_slice_python = _scan_py.scan_slice
KERNEL_MEASURES = _scan_py.MEASURES
