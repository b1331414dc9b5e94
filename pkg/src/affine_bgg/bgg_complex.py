"""Signed BGG-type complexes and their verification.

Alias of :mod:`affine_bgg.complexes`.
"""
from __future__ import annotations

import sys

from . import complexes

sys.modules[__name__] = complexes
