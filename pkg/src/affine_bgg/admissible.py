"""Admissible levels, integral root systems and admissible weights.

For an admissible level k with k + h^vee = p/q, the integral Weyl group of
k Lambda_0 is itself an affine Weyl group: of the same type when
gcd(q, r^vee) = 1, of Langlands-dual type otherwise.  It is modelled here as
an abstract ``AffineWeylGroup`` plus a realization homomorphism into the
ambient group.  On translations the realization is t_nu -> t_{kappa phi(nu)},
where phi is a linear map on simple-root coordinates and kappa a scale.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import ceil, floor, gcd

from . import linalg as la
from .affine_weyl import AffineRoot, AffineWeight, AffineWeylElement, AffineWeylGroup
from .root_system import RootSystemData, langlands_dual


class CriticalLevelError(ValueError):
    """k + h^vee = 0: the affine pairing has no slope in delta."""


@dataclass(frozen=True)
class AdmissibleNumber:
    admissible: bool
    k: Fraction
    p: int | None = None
    q: int | None = None
    dual_case: bool = False

    def __bool__(self) -> bool:
        return self.admissible

    def to_json(self) -> dict:
        out = {"admissible": self.admissible, "level": la.fmt(self.k)}
        if self.admissible:
            out.update(p=self.p, q=self.q, dual_case=self.dual_case)
        return out


def is_admissible_number(k, rs: RootSystemData) -> AdmissibleNumber:
    k = Fraction(k)
    shifted = k + rs.dual_coxeter_number
    if shifted <= 0:
        return AdmissibleNumber(False, k)
    p, q = shifted.numerator, shifted.denominator
    g = gcd(rs.lacing, q)
    if g == 1:
        ok, dual = p >= rs.dual_coxeter_number, False
    elif g == rs.lacing:
        ok, dual = p >= rs.coxeter_number, True
    else:
        ok, dual = False, False
    if not ok:
        return AdmissibleNumber(False, k)
    return AdmissibleNumber(True, k, p, q, dual)


def is_integral_root(W: AffineWeylGroup, lam: AffineWeight, beta: AffineRoot) -> bool:
    """<lam + rho, beta^vee> is an integer."""
    if not beta.is_real:
        raise ValueError("integrality is defined for real roots only")
    return Fraction(W.weight_pairing(lam + W.rho, beta)).denominator == 1


# -- regularity -------------------------------------------------------------------


def _pairing_line(W: AffineWeylGroup, lam: AffineWeight, a):
    """(c0, slope) with <lam + rho, (a + n delta)^vee> = c0 + n * slope."""
    rs = W.rs
    shifted = lam + W.rho
    if shifted.level == 0:
        raise CriticalLevelError("critical level k = -h^vee")
    c0 = Fraction(rs.pairing(shifted.classical, a))
    slope = Fraction(2) * Fraction(shifted.level) / rs.norm2(a)
    return c0, slope


def _meets(c0: Fraction, slope: Fraction, n0: int, sign: int) -> bool:
    """Is c0 + n slope (n >= n0) ever an integer of the given sign class?

    sign = -1 asks for {0, -1, -2, ...}; sign = +1 asks for {0, 1, 2, ...}.
    """
    if sign > 0:
        c0, slope = -c0, -slope
    bound = Fraction(0)
    if slope > 0:
        top = floor((bound - c0) / slope)
        return any((c0 + n * slope).denominator == 1 for n in range(n0, top + 1))
    start = max(n0, ceil((bound - c0) / slope)) if slope < 0 else n0
    if slope == 0:
        return (c0 <= bound) and c0.denominator == 1
    period = slope.denominator
    return any((c0 + n * slope).denominator == 1 for n in range(start, start + period))


def _regular(W: AffineWeylGroup, lam: AffineWeight, sign: int) -> bool:
    for a in W.rs.roots:
        c0, slope = _pairing_line(W, lam, a)
        n0 = 0 if W.rs.is_positive(a) else 1
        if _meets(c0, slope, n0, sign):
            return False
    return True


def is_regular_dominant(W: AffineWeylGroup, lam: AffineWeight) -> bool:
    """<lam + rho, gamma^vee> avoids {0, -1, -2, ...} on all positive real roots."""
    return _regular(W, lam, -1)


def is_regular_antidominant(W: AffineWeylGroup, lam: AffineWeight) -> bool:
    """<lam + rho, gamma^vee> avoids {0, 1, 2, ...} on all positive real roots."""
    return _regular(W, lam, +1)


# -- integral systems -----------------------------------------------------------------


class IntegralSystem:
    """Delta(k Lambda_0) and W(k Lambda_0), optionally conjugated by a twist y."""

    def __init__(self, base: RootSystemData, k, twist: AffineWeylElement | None = None):
        info = is_admissible_number(k, base)
        if not info:
            raise ValueError(f"level {la.fmt(Fraction(k))} is not admissible for {base.label}")
        self.base = base
        self.level = info.k
        self.p, self.q, self.dual_case = info.p, info.q, info.dual_case
        self.ambient = AffineWeylGroup(base)
        if self.dual_case:
            self.abstract_type = langlands_dual(base)
            lengths = base.simple_lengths()
            self.phi = tuple(tuple(la.norm(Fraction(2) / lengths[i]) if i == j else 0 for j in range(base.rank)) for i in range(base.rank))
            self.kappa = Fraction(self.q, base.lacing)
        else:
            self.abstract_type = base
            self.phi = la.identity(base.rank)
            self.kappa = Fraction(self.q)
        self.phi_inv = la.inverse(self.phi)
        self.abstract = AffineWeylGroup(self.abstract_type)
        self.twist = twist if twist is not None else self.ambient.identity()
        self._realized: dict = {}

    def __repr__(self) -> str:
        return f"IntegralSystem({self.base.label}, k={la.fmt(self.level)}, twist={self.ambient.format(self.twist)})"

    def with_twist(self, y: AffineWeylElement) -> IntegralSystem:
        return IntegralSystem(self.base, self.level, y)

    @property
    def vacuum(self) -> AffineWeight:
        return self.ambient.weight(level=self.level)

    # -- realization -------------------------------------------------------
    def _untwisted(self, w: AffineWeylElement) -> AffineWeylElement:
        mu = la.scale(self.kappa, la.mat_vec(self.phi, w.translation))
        fin = la.mat_mul(la.mat_mul(self.phi, w.finite), self.phi_inv)
        fin_inv = la.mat_mul(la.mat_mul(self.phi, w.finite_inv), self.phi_inv)
        return AffineWeylElement(mu, fin, fin_inv)

    def realize(self, w: AffineWeylElement) -> AffineWeylElement:
        """Image of an abstract element in the ambient group (conjugated by the twist)."""
        hit = self._realized.get(w)
        if hit is None:
            hit = self.twist * self._untwisted(w) * self.twist.inverse()
            self._realized[w] = hit
        return hit

    def realize_root(self, root: AffineRoot) -> AffineRoot:
        """Ambient root whose reflection realizes the abstract reflection s_root."""
        rs = self.base
        direction = la.mat_vec(self.phi, root.classical)
        alpha = self._parallel_root(direction)
        target = la.scale(root.n * self.kappa, la.mat_vec(self.phi, self.abstract_type.coroot(root.classical)))
        coroot = rs.coroot(alpha)
        i = next(j for j, x in enumerate(coroot) if x != 0)
        m = Fraction(target[i]) / Fraction(coroot[i])
        if m.denominator != 1:
            raise ArithmeticError("realized root has non-integral delta coefficient")
        untwisted = AffineRoot(alpha, int(m))
        return self.ambient.act_root(self.twist, untwisted)

    def _parallel_root(self, direction) -> tuple:
        for a in self.base.roots:
            # a positive multiple of direction
            ratios = {Fraction(x) / Fraction(d) for x, d in zip(a, direction) if d != 0}
            if len(ratios) == 1 and all((x == 0) == (d == 0) for x, d in zip(a, direction)):
                if next(iter(ratios)) > 0:
                    return a
        raise ArithmeticError(f"no root parallel to {direction}")

    @cached_property
    def pi_lambda(self) -> tuple[AffineRoot, ...]:
        """Realized simple roots; index 0 is the affine one."""
        return tuple(self.realize_root(self.abstract.simple_root(i)) for i in range(self.abstract.rank + 1))

    @cached_property
    def realized_generators(self) -> tuple[AffineWeylElement, ...]:
        return tuple(self.realize(self.abstract.s(i)) for i in range(self.abstract.rank + 1))

    def dot(self, w: AffineWeylElement, lam: AffineWeight) -> AffineWeight:
        return self.ambient.dot(self.realize(w), lam)

    def length(self, w: AffineWeylElement) -> int:
        return self.abstract.length(w)

    def semi_infinite_length(self, w: AffineWeylElement) -> int:
        return self.abstract.semi_infinite_length(w)

    def positive_integral_roots(self, max_delta: int) -> list[AffineRoot]:
        """Realized positive roots of the integral system with |delta coefficient| <= max_delta (untwisted)."""
        out = set()
        bound = max_delta + 1
        for a in self.abstract_type.roots:
            for n in range(-bound, bound + 1):
                root = AffineRoot(a, n)
                if not root.is_positive():
                    continue
                real = self.realize_root(root)
                untwisted = self.ambient.act_root(self.twist.inverse(), real)
                if abs(untwisted.n) <= max_delta:
                    out.add(real)
        return sorted(out, key=lambda r: (r.n, r.classical))

    def check_relations(self, max_order: int = 8) -> list[str]:
        """Coxeter relations of the realized generators; returns a list of problems."""
        gens = self.realized_generators
        problems = []
        e = self.ambient.identity()
        n = self.abstract.rank + 1
        # affine Cartan entries <alpha_i^vee, alpha_j> of the abstract affine root system
        roots = [self.abstract.simple_root(i) for i in range(n)]
        for i in range(n):
            if gens[i] * gens[i] != e:
                problems.append(f"s{i}^2 != e")
            for j in range(i + 1, n):
                a = self.abstract.weight_pairing(AffineWeight(roots[j].classical, 0, roots[j].n), roots[i])
                b = self.abstract.weight_pairing(AffineWeight(roots[i].classical, 0, roots[i].n), roots[j])
                prod = a * b
                order = {0: 2, 1: 3, 2: 4, 3: 6}.get(prod)
                x = gens[i] * gens[j]
                power = e
                hits = []
                for m in range(1, max_order + 1):
                    power = power * x
                    if power == e:
                        hits.append(m)
                        break
                if order is None:
                    if hits:
                        problems.append(f"(s{i}s{j}) has finite order {hits[0]}, expected infinite")
                elif order <= max_order and hits != [order]:
                    problems.append(f"(s{i}s{j}) order {hits} expected {order}")
        return problems

    def to_json(self) -> dict:
        A = self.ambient
        return {
            "type": self.base.type_letter,
            "rank": self.base.rank,
            "level": la.fmt(self.level),
            "p": self.p,
            "q": self.q,
            "dual_case": self.dual_case,
            "abstract_type": self.abstract_type.label,
            "twist": A.format(self.twist),
            "pi_lambda": [{"classical": list(r.classical), "n": r.n} for r in self.pi_lambda],
            "realized_generators": [A.format(g) for g in self.realized_generators],
        }


def integral_system(k, rs: RootSystemData, twist: AffineWeylElement | None = None) -> IntegralSystem:
    return IntegralSystem(rs, k, twist)


# -- admissible weights ----------------------------------------------------------------


@dataclass(frozen=True)
class AdmissibleWeight:
    weight: AffineWeight
    twist: AffineWeylElement
    base_weight: AffineWeight

    def labels(self, rs: RootSystemData) -> tuple:
        return rs.labels(self.base_weight.classical)


def _dominant_candidate(W: AffineWeylGroup, k, labels) -> AffineWeight:
    return AffineWeight(W.rs.weight_from_labels(labels), k, 0)


def enumerate_pr_plus(k, rs: RootSystemData) -> list[AdmissibleWeight]:
    """Admissible weights of level k with dominant integral classical part.

    Candidates have Dynkin labels in [0, p]; the shell with largest label p + 1
    is checked to contain nothing, so the cut is certified at run time.
    """
    system = IntegralSystem(rs, k)
    W = system.ambient
    p = system.p
    e = W.identity()
    out = []

    def admissible(labels) -> bool:
        lam = _dominant_candidate(W, system.level, labels)
        return is_regular_dominant(W, lam) and _same_integrality(W, system, lam)

    for labels in itertools.product(range(p + 1), repeat=rs.rank):
        if admissible(labels):
            lam = _dominant_candidate(W, system.level, labels)
            out.append(AdmissibleWeight(lam, e, lam))
    for labels in itertools.product(range(p + 2), repeat=rs.rank):
        if max(labels) == p + 1 and admissible(labels):
            raise RuntimeError(f"enumeration bound p={p} is not sufficient for {rs.label} at level {la.fmt(system.level)}")
    return out


def _same_integrality(W: AffineWeylGroup, system: IntegralSystem, lam: AffineWeight) -> bool:
    vac = system.vacuum
    for beta in system.pi_lambda:
        if not is_integral_root(W, lam, beta):
            return False
    for a in W.rs.positive_roots:
        for n in range(0, 2 * system.q + 1):
            beta = AffineRoot(a, n)
            if is_integral_root(W, lam, beta) != is_integral_root(W, vac, beta):
                return False
    return True


def check_twist(system: IntegralSystem, y: AffineWeylElement) -> bool:
    """y maps every realized simple root of the vacuum integral system to a positive root."""
    return all(system.ambient.act_root(y, beta).is_positive() for beta in system.pi_lambda)


def pr_k_y(k, rs: RootSystemData, y: AffineWeylElement) -> list[AdmissibleWeight]:
    system = IntegralSystem(rs, k)
    if not check_twist(system, y):
        raise ValueError("twist does not keep the integral simple roots positive")
    W = system.ambient
    return [AdmissibleWeight(W.dot(y, a.weight), y, a.weight) for a in enumerate_pr_plus(k, rs)]
