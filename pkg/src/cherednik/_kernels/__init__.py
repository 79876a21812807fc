"""Backend selection for the series kernels.

The compiled extension is preferred when present; CHEREDNIK_BACKEND=pure
forces the reference implementation, CHEREDNIK_BACKEND=compiled makes a
missing extension a hard error instead of a silent fallback.
"""

import os

from . import _ref

_requested = os.environ.get("CHEREDNIK_BACKEND", "").strip().lower()

if _requested not in ("", "pure", "compiled"):
    raise ImportError(
        f"CHEREDNIK_BACKEND={_requested!r} not recognized; use 'pure' or 'compiled'"
    )

_impl = _ref
if _requested in ("", "compiled"):
    try:
        from . import _fast as _impl  # type: ignore[no-redef]
    except ImportError:
        if _requested == "compiled":
            raise ImportError(
                "CHEREDNIK_BACKEND=compiled but the compiled extension is not "
                "available; rebuild the package or drop the override"
            ) from None

BACKEND: str = "pure" if _impl is _ref else "compiled"

hyp_grid = _impl.hyp_grid
gauss_series = _ref.gauss_series

__all__ = ["BACKEND", "hyp_grid", "gauss_series"]
