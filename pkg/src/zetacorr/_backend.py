"""Select the compiled core when it is importable, else the numpy fallback.

Set ``ZETACORR_BACKEND=python`` to force the fallback.
"""
import os

if os.environ.get("ZETACORR_BACKEND", "").lower() == "python":
    from . import _fallback as core
    NAME = "python"
else:
    try:
        from . import _core as core
        NAME = "cython"
    except ImportError:  # pragma: no cover - depends on the build
        from . import _fallback as core
        NAME = "python"

__all__ = ["core", "NAME"]
