"""Trace-functional toolkit bindings.

Matrices are numpy complex arrays; tensor factors are numbered from 1
with the first factor on the slow Kronecker index. Campaign functions
return the report as a plain dict.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__, __version__  # noqa: F401
