"""Combinatorics of two-sided BGG resolutions for admissible affine weights."""
from __future__ import annotations

import json
from importlib import resources

from .root_system import RootSystemData, build_root_system, langlands_dual

__version__ = "0.1.0"


def load_schema(name: str) -> dict:
    """JSON schema shipped with the package, e.g. ``load_schema("complex")``."""
    return json.loads((resources.files(__name__) / "schemas" / f"{name}.schema.json").read_text())


__all__ = ["RootSystemData", "build_root_system", "langlands_dual", "load_schema", "__version__"]
