"""Finite context-poset engine for topos quantum theory.

The heavy lifting lives in the C++ extension ``_toposqt``; this package
re-exports its surface. All numbers cross the boundary as exact "p/q"
strings, so nothing is ever rounded.
"""

from ._toposqt import Engine, ks_check

__all__ = ["Engine", "ks_check"]
__version__ = "0.1.0"
