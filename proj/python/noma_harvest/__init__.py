"""Outage and rate analysis of WPT and backscatter NOMA uplinks."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, bac, wpt  # noqa: F401
