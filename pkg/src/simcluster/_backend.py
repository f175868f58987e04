"""Selects the margin-kernel implementation at import time.

The compiled extension is preferred when present; the numpy fallback is
used otherwise.  ``SIMCLUSTER_BACKEND`` forces the choice: ``c`` (fail if
the extension is missing), ``python``, or ``auto`` (default).
"""

from __future__ import annotations

import os

_choice = os.environ.get("SIMCLUSTER_BACKEND", "auto").lower()
if _choice not in ("auto", "c", "python"):
    raise ImportError(f"unknown SIMCLUSTER_BACKEND={_choice!r}; "
                      "expected 'auto', 'c' or 'python'")

if _choice == "python":
    from . import _kernels_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
        BACKEND = "c"
    except ImportError:
        if _choice == "c":
            raise
        from . import _kernels_py as _impl
        BACKEND = "python"

own_margin = _impl.own_margin
all_margins = _impl.all_margins
