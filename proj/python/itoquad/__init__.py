"""Python bindings for the itoquad C++ core."""

try:
    from ._itoquad import *  # noqa: F401,F403  (installed wheel layout)
except ImportError:  # pragma: no cover - in-tree builds put the module on sys.path
    from _itoquad import *  # noqa: F401,F403
