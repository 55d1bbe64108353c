from ._qrouter import *  # noqa: F401,F403
from ._qrouter import __doc__  # noqa: F401
