"""Omni-surface aided wireless link simulator.

Cascaded channel evaluation with angle-dependent element responses,
1-bit surface beamforming, and reciprocity checks. The heavy lifting
lives in the compiled ``_iosim`` extension; this package re-exports it.
"""

from ._iosim import *  # noqa: F401,F403
from ._iosim import __version__  # noqa: F401
