"""Python bindings for the rarerel relation-extraction corpus toolkit."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
