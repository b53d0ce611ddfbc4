from ._hetnet import *  # noqa: F401,F403
from ._hetnet import __doc__  # noqa: F401
