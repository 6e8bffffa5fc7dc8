"""Damped Euler relative-entropy laboratory."""

from ._dwlab import *  # noqa: F401,F403
from ._dwlab import __doc__  # noqa: F401
