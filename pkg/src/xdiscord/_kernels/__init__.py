"""Kernel backend selection.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``XDISCORD_PURE_PYTHON`` is set to a non-empty value
other than ``0``, the numpy implementation is used. ``BACKEND`` names the
active one.
"""
import os

if os.environ.get("XDISCORD_PURE_PYTHON", "") not in ("", "0"):
    from ._pykernels import curve_eval, curve_point, entropy_bits, lower_hull, steer_entropy
    BACKEND = "python"
else:
    try:
        from ._ckernels import curve_eval, curve_point, entropy_bits, lower_hull, steer_entropy
        BACKEND = "compiled"
    except ImportError:
        from ._pykernels import curve_eval, curve_point, entropy_bits, lower_hull, steer_entropy
        BACKEND = "python"

__all__ = ["BACKEND", "curve_eval", "curve_point", "entropy_bits", "lower_hull", "steer_entropy"]
