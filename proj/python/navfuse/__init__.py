"""Python bindings for the navfuse planning core."""

from navfuse._core import *  # noqa: F401,F403
from navfuse._core import __doc__  # noqa: F401

__version__ = "0.1.0"
