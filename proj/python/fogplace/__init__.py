"""Energy-minimising VM placement for a PON fog architecture."""

from ._fogplace import *  # noqa: F401,F403
from ._fogplace import __doc__  # noqa: F401
