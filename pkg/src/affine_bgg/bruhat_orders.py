"""Bruhat orders, covers and enumeration windows.

Alias of :mod:`affine_bgg.bruhat`.
"""
from __future__ import annotations

import sys

from . import bruhat

sys.modules[__name__] = bruhat
