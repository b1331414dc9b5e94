"""Finite simple root systems with exact data.

Roots are integer vectors in the basis of simple roots.  The invariant form
is a rational Gram matrix on that basis, normalized so that long roots have
squared length 2.  The Cartan matrix follows a_ij = <alpha_i^vee, alpha_j>.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

from . import linalg as la

# Relative squared lengths of simple roots and Dynkin bonds per type.
# Bonded simple roots always pair to -1 once long roots have length^2 2.


def _diagram(letter: str, n: int) -> tuple[list[Fraction], list[tuple[int, int]]]:
    two = Fraction(2)
    path = [(i, i + 1) for i in range(n - 1)]
    if letter == "A" and n >= 1:
        return [two] * n, path
    if letter == "B" and n >= 2:
        return [two] * (n - 1) + [Fraction(1)], path
    if letter == "C" and n >= 2:
        return [Fraction(1)] * (n - 1) + [two], path
    if letter == "D" and n >= 4:
        return [two] * n, [(i, i + 1) for i in range(n - 2)] + [(n - 3, n - 1)]
    if letter == "E" and n in (6, 7, 8):
        edges = [(0, 2), (2, 3), (3, 4), (1, 3)] + [(i, i + 1) for i in range(4, n - 1)]
        return [two] * n, edges
    if letter == "F" and n == 4:
        return [two, two, Fraction(1), Fraction(1)], path
    if letter == "G" and n == 2:
        return [Fraction(2, 3), two], path
    raise ValueError(f"unknown finite type {letter}{n}")


def cartan_matrix(letter: str, n: int) -> tuple[tuple[int, ...], ...]:
    lengths, edges = _diagram(letter.upper(), n)
    gram = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        gram[i][i] = lengths[i]
    for i, j in edges:
        gram[i][j] = gram[j][i] = -max(lengths[i], lengths[j]) / 2
    return tuple(tuple(int(2 * gram[i][j] / gram[i][i]) for j in range(n)) for i in range(n))


def _symmetrizer(cartan) -> list[Fraction]:
    """Squared lengths L_i with L_i a_ij = L_j a_ji, longest equal to 2."""
    n = len(cartan)
    lengths: list[Fraction | None] = [None] * n
    lengths[0] = Fraction(1)
    stack = [0]
    while stack:
        i = stack.pop()
        for j in range(n):
            if j != i and cartan[i][j] != 0 and lengths[j] is None:
                lengths[j] = lengths[i] * cartan[i][j] / cartan[j][i]
                stack.append(j)
    if any(x is None for x in lengths):
        raise ValueError("Cartan matrix is not connected")
    top = max(lengths)
    return [2 * x / top for x in lengths]


@dataclass(frozen=True)
class RootSystemData:
    """Exact data of a finite simple root system."""

    type_letter: str
    rank: int
    cartan: tuple[tuple[int, ...], ...]
    gram: tuple[tuple, ...] = field(repr=False)
    positive_roots: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def label(self) -> str:
        return f"{self.type_letter}{self.rank}"

    # -- form and pairings -------------------------------------------------
    def form(self, u, v):
        return la.dot(u, la.mat_vec(self.gram, v))

    def form_row(self, u) -> tuple:
        """Row vector u^T G, so that form(u, v) = dot(form_row(u), v)."""
        return la.mat_vec(self.gram, u)

    def norm2(self, u):
        return self.form(u, u)

    def pairing(self, weight, root):
        """<weight, root^vee> = 2 (weight|root) / (root|root)."""
        return la.norm(Fraction(2) * self.form(weight, root) / self.norm2(root))

    def simple_root(self, i: int) -> tuple[int, ...]:
        return tuple(int(i == j) for j in range(self.rank))

    def simple_lengths(self) -> tuple:
        return tuple(self.gram[i][i] for i in range(self.rank))

    def height(self, root) -> int:
        return sum(root)

    # -- roots ------------------------------------------------------------
    @cached_property
    def roots(self) -> tuple[tuple[int, ...], ...]:
        neg = tuple(tuple(-x for x in r) for r in self.positive_roots)
        return self.positive_roots + neg

    @cached_property
    def root_set(self) -> frozenset:
        return frozenset(self.roots)

    def is_root(self, v) -> bool:
        return tuple(v) in self.root_set

    @staticmethod
    def is_positive(root) -> bool:
        return all(x >= 0 for x in root) and any(x > 0 for x in root)

    def coroot(self, root) -> tuple:
        """2 root / (root|root), in simple-root coordinates."""
        if not self.is_root(root):
            raise ValueError(f"{tuple(root)} is not a root of {self.label}")
        return la.scale(Fraction(2) / self.norm2(root), root)

    def is_long(self, root) -> bool:
        return self.norm2(root) == 2

    @cached_property
    def long_positive_roots(self) -> tuple:
        return tuple(r for r in self.positive_roots if self.is_long(r))

    @cached_property
    def short_positive_roots(self) -> tuple:
        return tuple(r for r in self.positive_roots if not self.is_long(r))

    # -- reflections ---------------------------------------------------------
    def reflect(self, v, root) -> tuple:
        c = self.pairing(v, root)
        return la.sub(v, la.scale(c, root))

    def reflection_matrix(self, root) -> la.Matrix:
        cols = [self.reflect(self.simple_root(j), root) for j in range(self.rank)]
        return la.transpose(cols)

    @cached_property
    def simple_reflections(self) -> tuple:
        return tuple(self.reflection_matrix(self.simple_root(i)) for i in range(self.rank))

    # -- distinguished elements ------------------------------------------------
    @cached_property
    def rho(self) -> tuple:
        total = [0] * self.rank
        for r in self.positive_roots:
            total = [a + b for a, b in zip(total, r)]
        return la.scale(Fraction(1, 2), total)

    @cached_property
    def gram_inverse(self) -> la.Matrix:
        return la.inverse(self.gram)

    @cached_property
    def fundamental_coweights(self) -> tuple:
        """omega_i^vee with (alpha_j | omega_i^vee) = delta_ij."""
        return tuple(la.mat_vec(self.gram_inverse, self.simple_root(i)) for i in range(self.rank))

    @cached_property
    def fundamental_weights(self) -> tuple:
        """omega_i with <omega_i, alpha_j^vee> = delta_ij."""
        d = self.simple_lengths()
        return tuple(la.scale(Fraction(d[i]) / 2, w) for i, w in enumerate(self.fundamental_coweights))

    @cached_property
    def rho_check(self) -> tuple:
        total = [0] * self.rank
        for w in self.fundamental_coweights:
            total = [a + b for a, b in zip(total, w)]
        return la.vec(total)

    @cached_property
    def theta(self) -> tuple[int, ...]:
        return max(self.positive_roots, key=lambda r: (sum(r), r))

    @cached_property
    def theta_short(self) -> tuple[int, ...]:
        short = self.short_positive_roots or self.positive_roots
        return max(short, key=lambda r: (sum(r), r))

    @cached_property
    def coxeter_number(self) -> int:
        return self.height(self.theta) + 1

    @cached_property
    def comarks(self) -> tuple[int, ...]:
        """Coordinates of theta^vee in the simple-coroot basis."""
        return tuple(int(c) for c in self.coroot_coordinates(self.coroot(self.theta)))

    @cached_property
    def dual_coxeter_number(self) -> int:
        return 1 + sum(self.comarks)

    @cached_property
    def lacing(self) -> int:
        best = 1
        for i in range(self.rank):
            for j in range(self.rank):
                if i != j:
                    best = max(best, self.cartan[i][j] * self.cartan[j][i])
        return best

    # -- lattices ----------------------------------------------------------
    def coroot_coordinates(self, mu) -> tuple:
        """Coordinates of mu in the basis of simple coroots."""
        d = self.simple_lengths()
        return tuple(la.norm(Fraction(x) * d[i] / 2) for i, x in enumerate(mu))

    def from_coroot_coordinates(self, coords) -> tuple:
        d = self.simple_lengths()
        return tuple(la.norm(Fraction(c) * 2 / d[i]) for i, c in enumerate(coords))

    def in_coroot_lattice(self, mu) -> bool:
        return la.is_integral(self.coroot_coordinates(mu))

    def in_coweight_lattice(self, mu) -> bool:
        return la.is_integral(self.form_row(mu))

    def weight_from_labels(self, labels) -> tuple:
        total = [Fraction(0)] * self.rank
        for c, w in zip(labels, self.fundamental_weights):
            total = [a + Fraction(c) * b for a, b in zip(total, w)]
        return la.vec(total)

    def labels(self, weight) -> tuple:
        """Dynkin labels <weight, alpha_i^vee>."""
        return tuple(self.pairing(weight, self.simple_root(i)) for i in range(self.rank))

    def to_json(self) -> dict:
        return {
            "type": self.type_letter,
            "rank": self.rank,
            "cartan": [list(row) for row in self.cartan],
            "positive_roots": [list(r) for r in self.positive_roots],
            "rho": [la.fmt(x) for x in self.rho],
            "theta": list(self.theta),
            "theta_short": list(self.theta_short),
            "h": self.coxeter_number,
            "h_check": self.dual_coxeter_number,
            "lacing": self.lacing,
        }


def _positive_roots(cartan) -> tuple[tuple[int, ...], ...]:
    n = len(cartan)
    simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for r in frontier:
            for i in range(n):
                c = sum(cartan[i][j] * r[j] for j in range(n))
                image = tuple(r[j] - (c if j == i else 0) for j in range(n))
                if all(x >= 0 for x in image) and image not in found:
                    found.add(image)
                    nxt.append(image)
        frontier = nxt
    return tuple(sorted(found, key=lambda r: (sum(r), r)))


def from_cartan(cartan, type_letter: str | None = None) -> RootSystemData:
    cartan = tuple(tuple(int(x) for x in row) for row in cartan)
    n = len(cartan)
    lengths = _symmetrizer(cartan)
    gram = tuple(tuple(la.norm(lengths[i] * cartan[i][j] / 2) for j in range(n)) for i in range(n))
    if type_letter is None:
        type_letter = identify_type(cartan)[0]
    return RootSystemData(type_letter, n, cartan, gram, _positive_roots(cartan))


def build_root_system(type_letter: str, rank: int) -> RootSystemData:
    letter = str(type_letter).upper()
    return from_cartan(cartan_matrix(letter, int(rank)), letter)


def identify_type(cartan) -> tuple[str, int]:
    """Type of a connected Cartan matrix, read off from root counts."""
    n = len(cartan)
    npos = len(_positive_roots(cartan))
    lacing = max([cartan[i][j] * cartan[j][i] for i in range(n) for j in range(n) if i != j], default=1)
    lengths = _symmetrizer(cartan)
    if lacing == 3:
        return "G", 2
    if lacing == 2:
        if n == 4 and npos == 24:
            return "F", 4
        # B_n has one short simple root, C_n has n-1 of them (B2 = C2; label by alpha_1 long)
        short = sum(1 for x in lengths if x != 2)
        if n == 2:
            return ("B", 2) if lengths[0] == 2 else ("C", 2)
        return ("B", n) if short == 1 else ("C", n)
    if npos == n * (n + 1) // 2:
        return "A", n
    if npos == n * (n - 1):
        return "D", n
    return "E", n


def langlands_dual(rs: RootSystemData) -> RootSystemData:
    letter = {"B": "C", "C": "B"}.get(rs.type_letter, rs.type_letter)
    return from_cartan(la.transpose(rs.cartan), letter)


def connected_components(rs: RootSystemData, subset) -> list[list[int]]:
    """Connected components of the Dynkin subdiagram on ``subset``, each sorted."""
    remaining = sorted(set(subset))
    comps = []
    while remaining:
        stack = [remaining.pop(0)]
        comp = set(stack)
        while stack:
            i = stack.pop()
            for j in list(remaining):
                if rs.cartan[i][j] != 0:
                    remaining.remove(j)
                    comp.add(j)
                    stack.append(j)
        comps.append(sorted(comp))
    return sorted(comps)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)
