"""Truncated formal characters of highest-weight modules.

A series is stored relative to its base weight lam: the key (beta, n) holds
the multiplicity of lam - beta - n*delta, with beta in simple-root
coordinates.  A truncation keeps n <= depth and beta_i <= offset_window.

Internally offsets are handled in affine simple-root coordinates
c = (n, beta_1 + n theta_1, ..., beta_r + n theta_r); every positive affine
root has c >= 0, so partial sums of a partition stay below its target.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import linalg as la
from .admissible import IntegralSystem, is_regular_dominant
from .affine_weyl import AffineWeight, AffineWeylElement
from .complexes import ComplexTruncation, elements_up_to_length
from .bruhat import translation_norm
from .root_system import RootSystemData


class WindowInsufficient(ValueError):
    """The complex does not contain every element contributing to the truncation."""

    def __init__(self, message: str, required: dict):
        super().__init__(f"{message}; required {required}")
        self.required = required


@dataclass(frozen=True)
class Truncation:
    depth: int
    offset_window: int

    def __post_init__(self):
        if self.depth < 0 or self.offset_window < 0:
            raise ValueError("truncation bounds must be nonnegative")

    def to_json(self) -> dict:
        return {"depth": self.depth, "offset_window": self.offset_window}


@dataclass
class CharacterSeries:
    weight: AffineWeight
    truncation: Truncation
    coefficients: dict = field(default_factory=dict)  # (beta, n) -> nonzero int

    def __getitem__(self, key) -> int:
        beta, n = key
        return self.coefficients.get((la.vec(beta), int(n)), 0)

    def items(self) -> list:
        return sorted(self.coefficients.items(), key=lambda kv: (kv[0][1], sum(kv[0][0]), kv[0][0]))

    def to_json(self) -> dict:
        return {
            "lambda": self.weight.to_json(),
            "truncation": self.truncation.to_json(),
            "coefficients": [{"beta": list(b), "n": n, "coefficient": c} for (b, n), c in self.items()],
        }

    def csv_rows(self) -> list[list[str]]:
        rows = [["beta_coords", "n", "coefficient"]]
        rows += [[" ".join(str(x) for x in b), str(n), str(c)] for (b, n), c in self.items()]
        return rows


# -- Kostant partition function ---------------------------------------------------------


def _affine_coords(rs: RootSystemData, beta, n) -> tuple:
    theta = rs.theta
    return (int(n),) + tuple(int(b) + int(n) * t for b, t in zip(beta, theta))


def _classical_offset(rs: RootSystemData, c) -> tuple:
    n = c[0]
    return tuple(x - n * t for x, t in zip(c[1:], rs.theta)), n


def _parts(rs: RootSystemData, top: tuple) -> list[tuple]:
    """Positive affine roots (imaginary ones repeated rank times) that fit below top."""
    out = []
    for n in range(top[0] + 1):
        if n == 0:
            cands = [(0,) + tuple(a) for a in rs.positive_roots]
        else:
            cands = [(n,) + tuple(x + n * t for x, t in zip(a, rs.theta)) for a in rs.roots]
            cands += [(n,) + tuple(n * t for t in rs.theta)] * rs.rank
        out.extend(c for c in cands if all(0 <= x <= b for x, b in zip(c, top)))
    return out


@lru_cache(maxsize=64)
def _kostant_table(cartan: tuple, top: tuple) -> dict:
    from .root_system import from_cartan

    rs = from_cartan(cartan)
    cells = list(itertools.product(*[range(b + 1) for b in top]))
    table = dict.fromkeys(cells, 0)
    table[(0,) * len(top)] = 1
    for p in _parts(rs, top):
        for c in cells:
            prev = tuple(x - y for x, y in zip(c, p))
            if min(prev) >= 0:
                table[c] += table[prev]
    return table


def kostant_partitions(beta, n: int, rs: RootSystemData) -> int:
    """Number of multisets of positive affine roots summing to beta + n delta.

    The imaginary root m*delta is counted with multiplicity rank.
    """
    c = _affine_coords(rs, beta, n)
    if min(c) < 0:
        return 0
    return _kostant_table(rs.cartan, c)[c]


def _truncation_top(rs: RootSystemData, t: Truncation) -> tuple:
    return (t.depth,) + tuple(t.offset_window + t.depth * x for x in rs.theta)


def _truncation_cells(rs: RootSystemData, t: Truncation) -> list[tuple]:
    """Affine coordinates of every key inside the truncation."""
    out = []
    for n in range(t.depth + 1):
        ranges = [range(t.offset_window + n * x + 1) for x in rs.theta]
        out.extend((n,) + rest for rest in itertools.product(*ranges))
    return out


def verma_character(rs: RootSystemData, lam: AffineWeight, t: Truncation) -> CharacterSeries:
    table = _kostant_table(rs.cartan, _truncation_top(rs, t))
    coeffs = {}
    for c in _truncation_cells(rs, t):
        v = table[c]
        if v:
            coeffs[_classical_offset(rs, c)] = v
    return CharacterSeries(lam, t, coeffs)


def _shifted_sum(rs: RootSystemData, lam: AffineWeight, t: Truncation, terms) -> dict:
    """sum over (sign, offset) of sign * ch M(lam - offset), offsets in affine coordinates."""
    table = _kostant_table(rs.cartan, _truncation_top(rs, t))
    cells = _truncation_cells(rs, t)
    coeffs: dict = {}
    for sign, off in terms:
        for c in cells:
            d = tuple(x - y for x, y in zip(c, off))
            if min(d) >= 0:
                v = table[d]
                if v:
                    key = _classical_offset(rs, c)
                    coeffs[key] = coeffs.get(key, 0) + sign * v
    return {k: v for k, v in coeffs.items() if v}


def _offset(system: IntegralSystem, lam: AffineWeight, w: AffineWeylElement) -> tuple:
    """Affine coordinates of lam - w.lam."""
    mu = system.dot(w, lam)
    beta = la.sub(lam.classical, mu.classical)
    n = lam.delta - mu.delta
    if not la.is_integral(beta) or Fraction(n).denominator != 1:
        raise ArithmeticError("dot orbit left the root lattice")
    return _affine_coords(system.base, beta, n)


def _inside(off: tuple, top: tuple) -> bool:
    return all(x <= b for x, b in zip(off, top))


# -- contributing elements ---------------------------------------------------------------


def contributing_elements(system: IntegralSystem, lam: AffineWeight, t: Truncation) -> list[AffineWeylElement]:
    """Every w in W(lam) whose Verma module M(w.lam) meets the truncation.

    For w realized as t_nu y in the ambient group, the delta-depth of w.lam
    is (K/2)|nu + y(x)/K|^2 - |x|^2/(2K) with x the classical part of lam+rho
    and K its level; bounding it by depth confines nu to an ellipsoid.
    """
    rs = system.base
    W = system.abstract
    K = Fraction(lam.level) + rs.dual_coxeter_number
    if K <= 0:
        raise ValueError("characters are computed only above the critical level")
    if not is_regular_dominant(system.ambient, lam):
        raise ValueError("the weight is not regular dominant")
    top = _truncation_top(rs, t)
    x = la.add(lam.classical, rs.rho)
    r2 = Fraction(2 * t.depth) / K + rs.norm2(x) / K**2
    finite = W.finite_elements
    shifts = [system.realize(y).translation for y in finite]
    bound = 3 * (r2 + max(rs.norm2(b) for b in shifts) + rs.norm2(x) / K**2)
    r = W.rank
    cols = [system.realize(W.coroot_translation([int(i == j) for j in range(r)])).translation for i in range(r)]
    gram = [[rs.form(a, b) for b in cols] for a in cols]
    inv = la.inverse(gram)
    box = [math.isqrt(math.floor(bound * inv[i][i])) + 1 for i in range(r)]
    out = []
    for coords in itertools.product(*[range(-b, b + 1) for b in box]):
        q = sum(coords[i] * gram[i][j] * coords[j] for i in range(r) for j in range(r))
        if q > bound:
            continue
        tr = W.coroot_translation(coords)
        for y in finite:
            w = tr * y
            if _inside(_offset(system, lam, w), top):
                out.append(w)
    out.sort(key=lambda v: (W.length(v), v.sort_key()))
    return out


def irreducible_character(system: IntegralSystem, lam: AffineWeight, t: Truncation) -> CharacterSeries:
    """Alternating sum over W(lam) of (-1)^l(w) ch M(w.lam)."""
    W = system.abstract
    terms = [(-1 if W.length(w) % 2 else 1, _offset(system, lam, w)) for w in contributing_elements(system, lam, t)]
    coeffs = _shifted_sum(system.base, lam, t, terms)
    negative = [k for k, v in coeffs.items() if v < 0]
    if negative:
        raise ArithmeticError(f"negative multiplicity at {sorted(negative)[0]}")
    return CharacterSeries(lam, t, coeffs)


def _certify_one_sided(c: ComplexTruncation, t: Truncation) -> None:
    system, lam = c.system, c.weight
    W = c.group
    top = _truncation_top(system.base, t)
    max_len = max(c.grades)
    shell = elements_up_to_length(W, max_len + 1)[-1]
    # lam - w.lam only grows along the Bruhat order, so one shell decides the rest
    if any(_inside(_offset(system, lam, x), top) for x in shell):
        needed = contributing_elements(system, lam, t)
        raise WindowInsufficient("length window too small", {"max_length": max(W.length(w) for w in needed)})


def _certify_two_sided(c: ComplexTruncation, t: Truncation) -> None:
    W = c.group
    present = set(c.elements)
    missing = [w for w in contributing_elements(c.system, c.weight, t) if w not in present]
    if missing:
        grades = [W.semi_infinite_length(w) for w in missing + c.elements]
        raise WindowInsufficient(
            "translation window too small",
            {
                "max_translation_norm": int(max(translation_norm(W, w) for w in missing)),
                "grades": [min(grades), max(grades)],
            },
        )


def euler_character(c: ComplexTruncation, t: Truncation) -> CharacterSeries:
    """sum_i (-1)^i sum over grade i of ch M(w.lam), after certifying the window."""
    if c.kind == "one_sided":
        _certify_one_sided(c, t)
    elif c.kind == "two_sided":
        _certify_two_sided(c, t)
    else:
        raise ValueError("Euler characters are defined for one_sided and two_sided complexes")
    top = _truncation_top(c.system.base, t)
    terms = []
    for i, ws in c.grades.items():
        for w in ws:
            off = _offset(c.system, c.weight, w)
            if _inside(off, top):
                terms.append((-1 if i % 2 else 1, off))
    return CharacterSeries(c.weight, t, _shifted_sum(c.system.base, c.weight, t, terms))


@dataclass(frozen=True)
class Comparison:
    equal: bool
    key: tuple | None = None
    first: int = 0
    second: int = 0

    def to_json(self) -> dict:
        if self.equal:
            return {"equal": True}
        beta, n = self.key
        return {"equal": False, "beta": list(beta), "n": n, "first": self.first, "second": self.second}


def compare(a: CharacterSeries, b: CharacterSeries) -> Comparison:
    if a.truncation != b.truncation or a.weight != b.weight:
        raise ValueError("series with different base weights or truncations cannot be compared")
    keys = sorted(set(a.coefficients) | set(b.coefficients), key=lambda k: (k[1], sum(k[0]), k[0]))
    for k in keys:
        x, y = a.coefficients.get(k, 0), b.coefficients.get(k, 0)
        if x != y:
            return Comparison(False, k, x, y)
    return Comparison(True)
