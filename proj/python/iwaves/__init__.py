"""Numerical laboratory for internal waves in 2D domains."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__, version

__version__ = version()
