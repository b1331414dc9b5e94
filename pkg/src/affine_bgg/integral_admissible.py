"""Integral root systems and admissible weights.

Alias of :mod:`affine_bgg.admissible`.
"""
from __future__ import annotations

import sys

from . import admissible

sys.modules[__name__] = admissible
