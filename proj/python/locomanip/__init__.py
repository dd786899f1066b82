"""Multi-modal locomotion planning and governed admittance control."""

from ._core import *  # noqa: F401,F403
