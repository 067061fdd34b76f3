"""ODMR line, map, fit, dipolar and acoustic toolkit."""

try:
    # installed wheel: extension lives inside the package
    from ._odmr import *  # noqa: F401,F403
except ImportError:
    # in-tree test run: extension on PYTHONPATH next to the build dir
    from _odmr import *  # noqa: F401,F403

__version__ = "0.1.0"
