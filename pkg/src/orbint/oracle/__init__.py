"""Brute-force lattice enumeration over F_q((eps)), the independent checker.

The hot enumeration kernel has a compiled twin; import order prefers the
compiled module unless ORBINT_PURE=1 is set in the environment.
"""

import os

if os.environ.get("ORBINT_PURE") == "1":
    from . import kernel_py as kernel

    KERNEL = "python"
else:
    try:
        from . import _kernel as kernel  # type: ignore[attr-defined]

        KERNEL = "compiled"
    except ImportError:
        from . import kernel_py as kernel

        KERNEL = "python"

__all__ = ["kernel", "KERNEL"]
