"""Affine Weyl group arithmetic over a finite root system.

An element is stored canonically as t_mu * y: a translation mu (simple-root
coordinates of the classical Cartan, rationals allowed so that the extended
group and rescaled lattices fit) followed by a finite Weyl element y (its
integer matrix on the simple-root basis, together with the inverse matrix).

Affine weights are triples (classical part, level, delta coefficient).  The
simple affine roots are indexed 0..rank with alpha_0 = -theta + delta.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import linalg as la
from .root_system import RootSystemData


@dataclass(frozen=True)
class AffineRoot:
    """The root classical + n*delta; classical is zero for imaginary roots."""

    classical: tuple
    n: int

    @property
    def is_real(self) -> bool:
        return any(self.classical)

    @property
    def is_imaginary(self) -> bool:
        return not self.is_real and self.n != 0

    def is_positive(self) -> bool:
        if not self.is_real:
            return self.n > 0
        return self.n > 0 or (self.n == 0 and _sign(self.classical) > 0)

    def __neg__(self) -> AffineRoot:
        return AffineRoot(tuple(-x for x in self.classical), -self.n)

    def __str__(self) -> str:
        return f"({','.join(la.fmt(x) for x in self.classical)};{self.n})"


@dataclass(frozen=True)
class AffineWeight:
    """Weight with classical part (simple-root coordinates), level and delta coefficient."""

    classical: tuple
    level: Fraction
    delta: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "classical", la.vec(Fraction(x) for x in self.classical))
        object.__setattr__(self, "level", la.norm(Fraction(self.level)))
        object.__setattr__(self, "delta", la.norm(Fraction(self.delta)))

    def __add__(self, other: AffineWeight) -> AffineWeight:
        return AffineWeight(la.add(self.classical, other.classical), self.level + other.level, self.delta + other.delta)

    def __sub__(self, other: AffineWeight) -> AffineWeight:
        return AffineWeight(la.sub(self.classical, other.classical), self.level - other.level, self.delta - other.delta)

    def to_json(self) -> dict:
        return {
            "classical": [la.fmt(x) for x in self.classical],
            "level": la.fmt(self.level),
            "delta": la.fmt(self.delta),
        }


def _sign(v) -> int:
    for x in v:
        if x > 0:
            return 1
        if x < 0:
            return -1
    return 0


class AffineWeylElement:
    """t_mu * y, compared and hashed on (mu, matrix of y)."""

    __slots__ = ("translation", "finite", "finite_inv", "_hash")

    def __init__(self, translation, finite, finite_inv):
        self.translation = la.vec(translation)
        self.finite = finite
        self.finite_inv = finite_inv
        self._hash = hash((self.translation, self.finite))

    def __eq__(self, other) -> bool:
        if not isinstance(other, AffineWeylElement):
            return NotImplemented
        return self.translation == other.translation and self.finite == other.finite

    def __hash__(self) -> int:
        return self._hash

    def __mul__(self, other: AffineWeylElement) -> AffineWeylElement:
        mu = la.add(self.translation, la.mat_vec(self.finite, other.translation))
        return AffineWeylElement(mu, la.mat_mul(self.finite, other.finite), la.mat_mul(other.finite_inv, self.finite_inv))

    def inverse(self) -> AffineWeylElement:
        mu = la.mat_vec(self.finite_inv, self.translation)
        return AffineWeylElement(tuple(-x for x in mu), self.finite_inv, self.finite)

    @property
    def finite_part(self) -> AffineWeylElement:
        return AffineWeylElement((0,) * len(self.translation), self.finite, self.finite_inv)

    def is_identity(self) -> bool:
        n = len(self.finite)
        return not any(self.translation) and self.finite == la.identity(n)

    def sort_key(self):
        return (tuple(Fraction(x) for x in self.translation), self.finite)

    def __repr__(self) -> str:
        return f"AffineWeylElement(t={[la.fmt(x) for x in self.translation]}, y={self.finite})"


_TOKEN = re.compile(r"\s*(?:(t\[[^\]]*\])|s(\d)|(e)|(\*))")


class AffineWeylGroup:
    """The affine Weyl group W (and its extension W^e) attached to ``rs``."""

    def __init__(self, rs: RootSystemData):
        self.rs = rs
        self.rank = rs.rank
        self._identity_matrix = la.identity(rs.rank)
        self._pos = rs.positive_roots
        self._pos_rows = tuple(rs.form_row(a) for a in self._pos)
        self._rho2_row = rs.form_row(la.scale(2, rs.rho))

    def __repr__(self) -> str:
        return f"AffineWeylGroup({self.rs.label})"

    # -- constructors ----------------------------------------------------
    def identity(self) -> AffineWeylElement:
        return AffineWeylElement((0,) * self.rank, self._identity_matrix, self._identity_matrix)

    def finite_element(self, matrix) -> AffineWeylElement:
        inv = la.inverse(matrix)
        return AffineWeylElement((0,) * self.rank, matrix, inv)

    def translation(self, mu) -> AffineWeylElement:
        """t_mu for mu in simple-root coordinates."""
        return AffineWeylElement(mu, self._identity_matrix, self._identity_matrix)

    def coroot_translation(self, coords) -> AffineWeylElement:
        """t_mu for mu given in the simple-coroot basis."""
        return self.translation(self.rs.from_coroot_coordinates(coords))

    @cached_property
    def generators(self) -> tuple[AffineWeylElement, ...]:
        gens = [self.reflection(self.simple_root(i)) for i in range(self.rank + 1)]
        return tuple(gens)

    def s(self, i: int) -> AffineWeylElement:
        if not 0 <= i <= self.rank:
            raise ValueError(f"simple reflection index {i} out of range 0..{self.rank}")
        return self.generators[i]

    def from_word(self, word) -> AffineWeylElement:
        w = self.identity()
        for i in word:
            w = w * self.s(i)
        return w

    def reflection(self, root: AffineRoot) -> AffineWeylElement:
        """s_{a + n delta} = t_{-n a^vee} s_a."""
        if not root.is_real:
            raise ValueError("imaginary roots have no reflection")
        mat = self.rs.reflection_matrix(root.classical)
        mu = la.scale(-root.n, self.rs.coroot(root.classical))
        return AffineWeylElement(mu, mat, mat)

    # -- roots ------------------------------------------------------------
    def simple_root(self, i: int) -> AffineRoot:
        if i == 0:
            return AffineRoot(tuple(-x for x in self.rs.theta), 1)
        return AffineRoot(self.rs.simple_root(i - 1), 0)

    def act_root(self, w: AffineWeylElement, root: AffineRoot) -> AffineRoot:
        """t_mu y (a + n delta) = y a + (n - (y a | mu)) delta."""
        a = la.mat_vec(w.finite, root.classical)
        shift = self.rs.form(a, w.translation)
        return AffineRoot(a, la.norm(root.n - shift))

    def inverse_act_root(self, w: AffineWeylElement, root: AffineRoot) -> AffineRoot:
        """w^{-1}(a + n delta) = y^{-1} a + (n + (a | mu)) delta."""
        a = la.mat_vec(w.finite_inv, root.classical)
        return AffineRoot(a, la.norm(root.n + self.rs.form(root.classical, w.translation)))

    # -- weights ------------------------------------------------------------
    def weight(self, classical=None, level=0, delta=0) -> AffineWeight:
        if classical is None:
            classical = (0,) * self.rank
        return AffineWeight(tuple(classical), level, delta)

    @cached_property
    def rho(self) -> AffineWeight:
        return AffineWeight(self.rs.rho, self.rs.dual_coxeter_number, 0)

    def act_weight(self, w: AffineWeylElement, lam: AffineWeight) -> AffineWeight:
        """Action on weights; t_mu sends (l, k, m) to (l + k mu, k, m - (l|mu) - k (mu|mu)/2)."""
        bar = la.mat_vec(w.finite, lam.classical)
        mu = w.translation
        k = lam.level
        shifted = la.add(bar, la.scale(k, mu))
        m = lam.delta - self.rs.form(bar, mu) - Fraction(k) * self.rs.norm2(mu) / 2
        return AffineWeight(shifted, k, m)

    def dot(self, w: AffineWeylElement, lam: AffineWeight) -> AffineWeight:
        return self.act_weight(w, lam + self.rho) - self.rho

    def weight_pairing(self, lam: AffineWeight, root: AffineRoot):
        """<lam, root^vee> for a real affine root."""
        a = root.classical
        return la.norm(Fraction(2) * (self.rs.form(lam.classical, a) + root.n * Fraction(lam.level)) / self.rs.norm2(a))

    # -- lengths -------------------------------------------------------------
    def finite_length(self, w: AffineWeylElement) -> int:
        inv = w.finite_inv
        return sum(1 for a in self._pos if _sign(la.mat_vec(inv, a)) < 0)

    def length(self, w: AffineWeylElement) -> int:
        total = 0
        inv = w.finite_inv
        mu = w.translation
        for a, row in zip(self._pos, self._pos_rows):
            c = la.dot(row, mu)
            if _sign(la.mat_vec(inv, a)) > 0:
                total += abs(c)
            else:
                total += abs(1 - c)
        if Fraction(total).denominator != 1:
            raise ValueError("translation outside the coweight lattice")
        return int(total)

    def twisted_length(self, w: AffineWeylElement, y: AffineWeylElement) -> int:
        yi = y.inverse()
        return self.length(yi * w) - self.length(yi)

    def semi_infinite_length(self, w: AffineWeylElement) -> int:
        value = self.finite_length(w) - la.dot(self._rho2_row, w.translation)
        if Fraction(value).denominator != 1:
            raise ValueError("translation outside the coweight lattice")
        return int(value)

    # -- descents and words ---------------------------------------------------
    def is_left_descent(self, w: AffineWeylElement, i: int) -> bool:
        return not self.inverse_act_root(w, self.simple_root(i)).is_positive()

    def left_descents(self, w: AffineWeylElement) -> list[int]:
        return [i for i in range(self.rank + 1) if self.is_left_descent(w, i)]

    def right_descents(self, w: AffineWeylElement) -> list[int]:
        return [i for i in range(self.rank + 1) if not self.act_root(w, self.simple_root(i)).is_positive()]

    def in_coroot_lattice(self, w: AffineWeylElement) -> bool:
        return self.rs.in_coroot_lattice(w.translation)

    def reduced_word(self, w: AffineWeylElement) -> list[int]:
        """Reduced word built by stripping the smallest left descent."""
        if not self.in_coroot_lattice(w):
            raise ValueError("element has a nontrivial diagram-automorphism part")
        word = []
        while True:
            i = next((j for j in range(self.rank + 1) if self.is_left_descent(w, j)), None)
            if i is None:
                break
            word.append(i)
            w = self.s(i) * w
        return word

    def finite_word(self, w: AffineWeylElement) -> list[int]:
        """Reduced word of the finite part in s_1..s_rank."""
        y = w.finite_part
        word = []
        while True:
            i = next((j for j in range(1, self.rank + 1) if self.is_left_descent(y, j)), None)
            if i is None:
                return word
            word.append(i)
            y = self.s(i) * y

    @cached_property
    def finite_elements(self) -> tuple[AffineWeylElement, ...]:
        """All elements of the finite Weyl group, breadth first from e."""
        seen = {self.identity()}
        order = [self.identity()]
        frontier = [self.identity()]
        while frontier:
            nxt = []
            for y in frontier:
                for i in range(1, self.rank + 1):
                    z = self.s(i) * y
                    if z not in seen:
                        seen.add(z)
                        order.append(z)
                        nxt.append(z)
            frontier = nxt
        return tuple(order)

    # -- text form -----------------------------------------------------------
    def format(self, w: AffineWeylElement) -> str:
        parts = []
        if any(w.translation):
            coords = self.rs.coroot_coordinates(w.translation)
            parts.append("t[" + ",".join(la.fmt(c) for c in coords) + "]")
        word = self.finite_word(w)
        if word:
            parts.append("".join(f"s{i}" for i in word))
        return "*".join(parts) if parts else "e"

    def parse(self, text: str) -> AffineWeylElement:
        """Parse products of t[c1,...,cn] (simple-coroot coordinates), s<i> and e."""
        pos = 0
        w = self.identity()
        text = text.strip()
        if not text:
            raise ValueError("empty element")
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse element {text!r} at position {pos}")
            pos = m.end()
            if m.group(1):
                inner = m.group(1)[2:-1]
                coords = [la.parse_rational(c) for c in inner.split(",")] if inner.strip() else []
                if len(coords) != self.rank:
                    raise ValueError(f"translation needs {self.rank} coordinates, got {len(coords)}")
                w = w * self.coroot_translation(coords)
            elif m.group(2):
                w = w * self.s(int(m.group(2)))
        return w
