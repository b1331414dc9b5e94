"""Usual, twisted and semi-infinite Bruhat orders on an affine Weyl group.

Conventions (kept literally):

* ``w covers w'`` in the usual or y-twisted order means w' is below w and
  the (twisted) length drops by one.
* ``w covers w'`` in the semi-infinite order means w' is below w and the
  semi-infinite length *rises* by one.  This is the direction of the
  differential of the two-sided complex.

``height`` below is the integer that drops by one along every cover, so the
three orders can share the enumeration code.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .affine_weyl import AffineRoot, AffineWeylElement, AffineWeylGroup


class StabilityError(RuntimeError):
    """The large-translation test gave different answers at c and 2c."""


@dataclass(frozen=True)
class OrderKind:
    kind: str  # "usual", "twisted" or "semi_infinite"
    twist: AffineWeylElement | None = None

    @staticmethod
    def usual() -> OrderKind:
        return OrderKind("usual")

    @staticmethod
    def twisted(y: AffineWeylElement) -> OrderKind:
        return OrderKind("twisted", y)

    @staticmethod
    def semi_infinite() -> OrderKind:
        return OrderKind("semi_infinite")

    def __post_init__(self):
        if self.kind not in ("usual", "twisted", "semi_infinite"):
            raise ValueError(f"unknown order kind {self.kind!r}")
        if self.kind == "twisted" and self.twist is None:
            raise ValueError("twisted order needs a twist")


@dataclass(frozen=True)
class EnumWindow:
    """Bounds |(alpha_i|mu)| <= max_translation_norm and |n| <= max_delta."""

    max_translation_norm: int
    max_delta: int

    def to_json(self) -> dict:
        return {"max_translation_norm": self.max_translation_norm, "max_delta": self.max_delta}


@dataclass
class CoverResult:
    elements: list
    window: EnumWindow | None
    direction: str = "down"
    candidates_checked: int = 0


def _require_affine(W: AffineWeylGroup, *elements):
    for w in elements:
        if not W.in_coroot_lattice(w):
            raise ValueError("Bruhat order is only implemented on W, not on the extended group")


def bruhat_leq(W: AffineWeylGroup, u: AffineWeylElement, w: AffineWeylElement) -> bool:
    """u <= w in the Bruhat order, by the left-descent recursion."""
    _require_affine(W, u, w)
    lu, lw = W.length(u), W.length(w)
    while True:
        if lu > lw:
            return False
        if lu == lw:
            return u == w
        if lu == 0:
            return True
        i = next(j for j in range(W.rank + 1) if W.is_left_descent(w, j))
        s = W.s(i)
        if W.is_left_descent(u, i):
            u = s * u
            lu -= 1
        w = s * w
        lw -= 1


def twisted_leq(W: AffineWeylGroup, upper: AffineWeylElement, lower: AffineWeylElement, y: AffineWeylElement) -> bool:
    """True iff lower is below upper in the y-twisted order: y^{-1} lower <= y^{-1} upper."""
    yi = y.inverse()
    return bruhat_leq(W, yi * lower, yi * upper)


class SemiInfiniteOracle:
    """Decides the semi-infinite order by translating far into the dominant chamber.

    upper >= lower  iff  t_lam lower <= t_lam upper for large dominant lam.  The
    test runs at lam = c * m * rho_check and at 2c; a disagreement raises.
    """

    def __init__(self, W: AffineWeylGroup):
        self.W = W
        rs = W.rs
        m = 1
        while not rs.in_coroot_lattice(la.scale(m, rs.rho_check)):
            m += 1
        self.base = la.scale(m, rs.rho_check)
        self.cache: dict = {}

    def scale(self, *elements) -> int:
        W = self.W
        coord = 0
        for w in elements:
            row = W.rs.form_row(w.translation)
            coord = max([coord] + [abs(Fraction(x)) for x in row])
        bound = max(W.length(w) for w in elements)
        return int(2 * coord + bound + 2)

    def translate(self, c: int) -> AffineWeylElement:
        return self.W.translation(la.scale(c, self.base))

    def leq_at(self, upper, lower, c: int) -> bool:
        t = self.translate(c)
        return bruhat_leq(self.W, t * lower, t * upper)

    def __call__(self, upper: AffineWeylElement, lower: AffineWeylElement) -> bool:
        if upper == lower:
            return True
        key = (upper, lower)
        if key in self.cache:
            return self.cache[key]
        _require_affine(self.W, upper, lower)
        c = self.scale(upper, lower)
        first = self.leq_at(upper, lower, c)
        second = self.leq_at(upper, lower, 2 * c)
        if first != second:
            raise StabilityError(
                f"semi-infinite comparison unstable between c={c} and c={2 * c} for "
                f"{self.W.format(upper)} vs {self.W.format(lower)}"
            )
        self.cache[key] = first
        return first


def _semi_oracle(W: AffineWeylGroup) -> SemiInfiniteOracle:
    oracle = getattr(W, "_semi_infinite_oracle", None)
    if oracle is None:
        oracle = SemiInfiniteOracle(W)
        W._semi_infinite_oracle = oracle
    return oracle


def semi_infinite_leq(W: AffineWeylGroup, upper: AffineWeylElement, lower: AffineWeylElement) -> bool:
    """True iff upper is above lower in the semi-infinite order."""
    return _semi_oracle(W)(upper, lower)


def geq(W: AffineWeylGroup, upper, lower, kind: OrderKind) -> bool:
    if kind.kind == "usual":
        return bruhat_leq(W, lower, upper)
    if kind.kind == "twisted":
        return twisted_leq(W, upper, lower, kind.twist)
    return semi_infinite_leq(W, upper, lower)


def grade(W: AffineWeylGroup, w: AffineWeylElement, kind: OrderKind) -> int:
    """The length function that grades ``kind``: l, l^y or the semi-infinite length."""
    if kind.kind == "usual":
        return W.length(w)
    if kind.kind == "twisted":
        return W.twisted_length(w, kind.twist)
    return W.semi_infinite_length(w)


def height(W: AffineWeylGroup, w: AffineWeylElement, kind: OrderKind) -> int:
    """Drops by exactly one along each cover."""
    g = grade(W, w, kind)
    return -g if kind.kind == "semi_infinite" else g


# -- reflections ---------------------------------------------------------------


class ReflectionTable:
    """Recognizes reflections s_{a + n delta} among group elements."""

    def __init__(self, W: AffineWeylGroup):
        self.W = W
        self.by_matrix = {W.rs.reflection_matrix(a): a for a in W.rs.positive_roots}

    def root_of(self, r: AffineWeylElement) -> AffineRoot | None:
        """The positive real root gamma with r = s_gamma, or None."""
        a = self.by_matrix.get(r.finite)
        if a is None:
            return None
        coroot = self.W.rs.coroot(a)
        # r = t_{-n a^vee} s_a
        i = next(j for j, x in enumerate(coroot) if x != 0)
        n = -Fraction(r.translation[i]) / Fraction(coroot[i])
        if n.denominator != 1 or la.scale(-n, coroot) != r.translation:
            return None
        root = AffineRoot(a, int(n))
        return root if root.is_positive() else -root


def _tables(W: AffineWeylGroup) -> ReflectionTable:
    table = getattr(W, "_reflection_table", None)
    if table is None:
        table = ReflectionTable(W)
        W._reflection_table = table
    return table


def reflection_related(W: AffineWeylGroup, u: AffineWeylElement, w: AffineWeylElement) -> AffineRoot | None:
    return _tables(W).root_of(u * w.inverse())


def is_cover(W: AffineWeylGroup, upper, lower, kind: OrderKind) -> bool:
    if height(W, upper, kind) != height(W, lower, kind) + 1:
        return False
    if reflection_related(W, upper, lower) is None:
        return False
    return geq(W, upper, lower, kind)


# -- windows -------------------------------------------------------------------


def translation_norm(W: AffineWeylGroup, w: AffineWeylElement):
    return max((abs(Fraction(x)) for x in W.rs.form_row(w.translation)), default=0)


def in_window(W: AffineWeylGroup, w: AffineWeylElement, window: EnumWindow) -> bool:
    return translation_norm(W, w) <= window.max_translation_norm


def window_translations(W: AffineWeylGroup, norm: int) -> list[tuple]:
    """All mu in the coroot lattice with |(alpha_i|mu)| <= norm, in simple-root coordinates."""
    rs = W.rs
    n = rs.rank
    # (alpha_i | sum_j c_j alpha_j^vee) = sum_j a_ji c_j
    at = la.transpose(rs.cartan)
    inv = la.inverse(at)
    bounds = [int(norm * sum(abs(Fraction(x)) for x in row)) for row in inv]
    out = []
    for coords in itertools.product(*[range(-b, b + 1) for b in bounds]):
        mu = rs.from_coroot_coordinates(coords)
        if all(abs(Fraction(x)) <= norm for x in rs.form_row(mu)):
            out.append(mu)
    return out


def window_elements(W: AffineWeylGroup, norm: int) -> list[AffineWeylElement]:
    elements = []
    for mu in window_translations(W, norm):
        t = W.translation(mu)
        elements.extend(t * y for y in W.finite_elements)
    return elements


def reflection_candidates(W: AffineWeylGroup, w: AffineWeylElement, max_delta: int):
    for a in W.rs.positive_roots:
        for n in range(-max_delta, max_delta + 1):
            yield W.reflection(AffineRoot(a, n)) * w


def covers(W: AffineWeylGroup, w: AffineWeylElement, kind: OrderKind, window: EnumWindow, direction: str = "down") -> CoverResult:
    """Exhaustive covers of ``w`` among s_gamma w with gamma inside the window."""
    if direction not in ("down", "up"):
        raise ValueError("direction must be 'down' or 'up'")
    target = height(W, w, kind) + (-1 if direction == "down" else 1)
    found = []
    checked = 0
    for v in reflection_candidates(W, w, window.max_delta):
        checked += 1
        if not in_window(W, v, window) or height(W, v, kind) != target:
            continue
        ok = geq(W, w, v, kind) if direction == "down" else geq(W, v, w, kind)
        if ok:
            found.append(v)
    found = sorted(set(found), key=lambda v: v.sort_key())
    return CoverResult(found, window, direction, checked)


def inversion_reflections(W: AffineWeylGroup, w: AffineWeylElement) -> list[AffineRoot]:
    """Positive real roots gamma with w^{-1} gamma negative (there are l(w) of them)."""
    rs = W.rs
    out = []
    for a in rs.roots:
        c = rs.form(a, w.translation)
        neg_classical = any(x < 0 for x in la.mat_vec(w.finite_inv, a))
        # w^{-1}(a + n delta) = y^{-1} a + (n + c) delta is negative iff n + c < 0, or = 0 with y^{-1} a < 0
        top = -c if neg_classical else -c - 1
        bottom = 0 if rs.is_positive(a) else 1
        for n in range(bottom, int(top) + 1):
            out.append(AffineRoot(a, n))
    return out


def exact_down_covers(W: AffineWeylGroup, w: AffineWeylElement) -> list[AffineWeylElement]:
    """Usual-order covers below w, with no window needed."""
    lw = W.length(w)
    out = {W.reflection(g) * w for g in inversion_reflections(W, w)}
    return sorted((v for v in out if W.length(v) == lw - 1), key=lambda v: v.sort_key())


def exact_twisted_down_covers(W: AffineWeylGroup, w: AffineWeylElement, y: AffineWeylElement) -> list[AffineWeylElement]:
    yi = y.inverse()
    return sorted((y * v for v in exact_down_covers(W, yi * w)), key=lambda v: v.sort_key())


# -- squares and intervals -------------------------------------------------------


def squares(down: dict) -> list[tuple]:
    """Quadruples (w1, w2, w3, w4) with w1 > w2 > w4, w1 > w3 > w4, w2 != w3.

    ``down`` maps each element to the collection of elements it covers.
    Each square is listed once, with w2 before w3 in sort order.
    """
    out = []
    for w1, mids in down.items():
        below: dict = {}
        for v in mids:
            for x in down.get(v, ()):
                below.setdefault(x, []).append(v)
        for w4, vs in below.items():
            vs = sorted(set(vs), key=lambda v: v.sort_key())
            for a, b in itertools.combinations(vs, 2):
                out.append((w1, a, b, w4))
    out.sort(key=lambda q: tuple(x.sort_key() for x in q))
    return out


def diamond_count(W: AffineWeylGroup, upper, lower, kind: OrderKind, window: EnumWindow) -> int:
    if height(W, upper, kind) != height(W, lower, kind) + 2:
        return 0
    mids = covers(W, upper, kind, window, "down").elements
    return sum(1 for v in mids if is_cover(W, v, lower, kind))


def interval(W: AffineWeylGroup, lower, upper, kind: OrderKind, window: EnumWindow | None = None) -> list:
    """Elements v with lower <= v <= upper, found by walking down covers from upper."""
    if not geq(W, upper, lower, kind):
        return []
    if kind.kind == "semi_infinite" and window is None:
        raise ValueError("semi-infinite intervals need a window")
    seen = {upper}
    frontier = [upper]
    while frontier:
        nxt = []
        for w in frontier:
            if kind.kind == "usual":
                below = exact_down_covers(W, w)
            elif kind.kind == "twisted":
                below = exact_twisted_down_covers(W, w, kind.twist)
            else:
                below = covers(W, w, kind, window, "down").elements
            for v in below:
                if v not in seen and height(W, v, kind) >= height(W, lower, kind) and geq(W, v, lower, kind):
                    seen.add(v)
                    nxt.append(v)
        frontier = nxt
    return sorted(seen, key=lambda v: (-height(W, v, kind), v.sort_key()))
