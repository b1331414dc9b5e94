"""Parabolic factorisations and Levi restriction.

Alias of :mod:`affine_bgg.parabolic`.
"""
from __future__ import annotations

import sys

from . import parabolic

sys.modules[__name__] = parabolic
