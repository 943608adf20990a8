"""Sound-texture statistics and self-supervised label spaces."""

from ._soundtex import *  # noqa: F401,F403
from ._soundtex import __version__  # noqa: F401
