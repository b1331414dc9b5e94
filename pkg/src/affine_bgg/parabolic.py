"""Semi-infinite parabolic data: W_S, minimal representatives, Levi levels.

Subsets S of the finite simple roots are given by 1-based indices, matching
the simple reflections s_1..s_rank.  For each connected component of S the
affine simple root -theta_i + delta is added to S to form the simple system
of the parabolic root system.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import linalg as la
from .admissible import is_admissible_number, is_regular_dominant
from .affine_weyl import AffineRoot, AffineWeight, AffineWeylElement, AffineWeylGroup
from .bruhat import window_elements
from .root_system import RootSystemData, connected_components, from_cartan


@dataclass(frozen=True)
class LeviComponent:
    indices: tuple[int, ...]  # 1-based ambient indices
    root_system: RootSystemData  # own normalization (long roots of length^2 2)
    theta: tuple  # highest root, ambient coordinates
    theta_short: tuple
    scale: Fraction  # 2 / (theta|theta) in the ambient form

    @cached_property
    def group(self) -> AffineWeylGroup:
        return AffineWeylGroup(self.root_system)

    @property
    def dual_coxeter_number(self) -> int:
        return self.root_system.dual_coxeter_number


class ParabolicData:
    def __init__(self, rs: RootSystemData, subset):
        subset = sorted(set(int(i) for i in subset))
        if any(not 1 <= i <= rs.rank for i in subset):
            raise ValueError(f"subset {subset} is not inside 1..{rs.rank}")
        self.rs = rs
        self.subset = tuple(subset)
        self.components = tuple(self._component(c) for c in connected_components(rs, [i - 1 for i in subset]))

    def _component(self, zero_based) -> LeviComponent:
        rs = self.rs
        inside = set(zero_based)
        roots = [a for a in rs.positive_roots if all(x == 0 or j in inside for j, x in enumerate(a))]
        theta = max(roots, key=lambda r: (sum(r), r))
        short = [a for a in roots if rs.norm2(a) < rs.norm2(theta)]
        theta_s = max(short, key=lambda r: (sum(r), r)) if short else theta
        sub = tuple(tuple(rs.cartan[i][j] for j in zero_based) for i in zero_based)
        comp_rs = from_cartan(sub)
        return LeviComponent(tuple(i + 1 for i in zero_based), comp_rs, theta, theta_s, Fraction(2) / rs.norm2(theta))

    @cached_property
    def simple_roots(self) -> tuple[AffineRoot, ...]:
        """Pi_S in lexicographic order."""
        roots = [AffineRoot(self.rs.simple_root(i - 1), 0) for i in self.subset]
        roots += [AffineRoot(tuple(-x for x in c.theta), 1) for c in self.components]
        return tuple(sorted(roots, key=lambda r: (r.classical, r.n)))

    @cached_property
    def finite_positive_roots(self) -> tuple:
        inside = {i - 1 for i in self.subset}
        return tuple(a for a in self.rs.positive_roots if all(x == 0 or j in inside for j, x in enumerate(a)))

    def contains_root(self, root: AffineRoot) -> bool:
        inside = {i - 1 for i in self.subset}
        return root.is_real and all(x == 0 or j in inside for j, x in enumerate(root.classical))

    # -- component groups -----------------------------------------------------
    def embed(self, comp: LeviComponent, w: AffineWeylElement, W: AffineWeylGroup) -> AffineWeylElement:
        """Ambient image of an element of the component's affine Weyl group."""
        Wc = comp.group
        coords = Wc.rs.coroot_coordinates(w.translation)
        amb = [0] * self.rs.rank
        for c, i in zip(coords, comp.indices):
            amb[i - 1] = c
        out = W.coroot_translation(amb)
        for j in Wc.finite_word(w):
            out = out * W.s(comp.indices[j - 1])
        return out


def is_minimal_rep(W: AffineWeylGroup, w: AffineWeylElement, data: ParabolicData) -> bool:
    """w^{-1} maps every root of Pi_S to a positive root."""
    return all(W.inverse_act_root(w, b).is_positive() for b in data.simple_roots)


def minimal_rep_criterion(W: AffineWeylGroup, v: AffineWeylElement, data: ParabolicData) -> bool:
    """Arithmetic test on v = t_mu y: (alpha|mu) is 0 or 1 according to the sign of y^{-1} alpha."""
    rs = W.rs
    for a in data.finite_positive_roots:
        c = rs.form(a, v.translation)
        positive = all(x >= 0 for x in la.mat_vec(v.finite_inv, a))
        if c != (0 if positive else 1):
            return False
    return True


def decompose(W: AffineWeylGroup, w: AffineWeylElement, data: ParabolicData):
    """Return (u, v) with u in W_S, v minimal, u v = w.

    Strips the lexicographically first beta in Pi_S with w^{-1} beta negative.
    """
    u = W.identity()
    cur = w
    while True:
        beta = next((b for b in data.simple_roots if not W.inverse_act_root(cur, b).is_positive()), None)
        if beta is None:
            return u, cur
        s = W.reflection(beta)
        cur = s * cur
        u = u * s


# -- levels and restriction -------------------------------------------------------


@dataclass(frozen=True)
class LeviLevels:
    k0: Fraction
    levels: tuple[Fraction, ...]

    def to_json(self) -> dict:
        return {"k0": la.fmt(self.k0), "levels": [la.fmt(x) for x in self.levels]}


def levi_levels(k, data: ParabolicData) -> LeviLevels:
    shifted = Fraction(k) + data.rs.dual_coxeter_number
    levels = tuple(la.norm(c.scale * shifted - c.dual_coxeter_number) for c in data.components)
    return LeviLevels(la.norm(shifted), levels)


@dataclass(frozen=True)
class RestrictedWeight:
    indices: tuple[int, ...]
    labels: tuple
    level: Fraction

    def as_weight(self, comp: LeviComponent) -> AffineWeight:
        return AffineWeight(comp.root_system.weight_from_labels(self.labels), self.level, 0)

    def to_json(self) -> dict:
        return {"indices": list(self.indices), "labels": [la.fmt(x) for x in self.labels], "level": la.fmt(self.level)}


def restrict_weight(lam: AffineWeight, data: ParabolicData) -> tuple[RestrictedWeight, ...]:
    rs = data.rs
    shifted = Fraction(lam.level) + rs.dual_coxeter_number
    out = []
    for c in data.components:
        labels = tuple(rs.pairing(lam.classical, rs.simple_root(i - 1)) for i in c.indices)
        out.append(RestrictedWeight(c.indices, labels, la.norm(c.scale * shifted - c.dual_coxeter_number)))
    return tuple(out)


# -- Borel-Weil index sets ----------------------------------------------------------


@dataclass
class BorelWeilEntry:
    element: AffineWeylElement
    weight: AffineWeight
    restricted: tuple[RestrictedWeight, ...]
    component_admissible: bool


@dataclass
class BorelWeilResult:
    entries: list
    window_norm: int
    grade: int
    conditional: bool  # produced with a non-minimal S


def borel_weil_index(system, lam: AffineWeight, subset, grade: int, window_norm: int, assume_remark: bool = False) -> BorelWeilResult:
    """Minimal representatives in W(lam) of a given semi-infinite grade, with restricted weights.

    ``system`` is the IntegralSystem of lam; elements are reported in its
    abstract group.  Only singleton S is accepted unless ``assume_remark``.
    """
    subset = sorted(set(subset))
    if len(subset) != 1 and not assume_remark:
        raise ValueError("Borel-Weil index sets need a single simple root (pass assume_remark to lift this)")
    abstract = system.abstract
    abs_data = ParabolicData(system.abstract_type, subset)
    amb_data = ParabolicData(system.base, subset)
    entries = []
    for w in window_elements(abstract, window_norm):
        if abstract.semi_infinite_length(w) != grade or not is_minimal_rep(abstract, w, abs_data):
            continue
        weight = system.dot(w, lam)
        restricted = restrict_weight(weight, amb_data)
        ok = True
        for comp, r in zip(amb_data.components, restricted):
            info = is_admissible_number(r.level, comp.root_system)
            labels_ok = all(Fraction(x).denominator == 1 and x >= 0 for x in r.labels)
            ok = ok and bool(info) and labels_ok and is_regular_dominant(comp.group, r.as_weight(comp))
        entries.append(BorelWeilEntry(w, weight, restricted, ok))
    entries.sort(key=lambda e: e.element.sort_key())
    return BorelWeilResult(entries, window_norm, grade, len(subset) != 1)
