"""Truncated BGG-type complexes as sign-labelled graded graphs.

Three kinds are built over the integral Weyl group W(lam), which is handled
through its abstract affine Weyl group:

* ``one_sided``: grades l(w) >= 0, edges go from grade i to i - 1.
* ``twisted``: grades l^y(w) >= -l(y), edges go from grade i to i - 1.
* ``two_sided``: grades are semi-infinite lengths, edges go from i to i + 1.

An edge (w, w') always means w covers w' in the relevant order.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field

from . import linalg as la
from .admissible import IntegralSystem, is_regular_dominant
from .affine_weyl import AffineWeight, AffineWeylElement, AffineWeylGroup
from .bruhat import (
    EnumWindow,
    exact_down_covers,
    exact_twisted_down_covers,
    reflection_related,
    semi_infinite_leq,
    twisted_leq,
    window_elements,
)
from .signs import SignAssignment, solve_signs, square_failures

KINDS = ("one_sided", "twisted", "two_sided")


class WindowError(ValueError):
    """The requested truncation cannot be certified with the given window."""


@dataclass
class VerificationReport:
    two_ok: list = field(default_factory=list)
    one_module_level: list = field(default_factory=list)
    failures: list = field(default_factory=list)
    window_truncated: list = field(default_factory=list)
    square_failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures and not self.square_failures


@dataclass
class ComplexTruncation:
    system: IntegralSystem
    weight: AffineWeight
    kind: str
    twist: AffineWeylElement | None
    grades: dict
    down: dict
    signs: SignAssignment
    window: dict
    report: VerificationReport = field(default_factory=VerificationReport)

    @property
    def group(self) -> AffineWeylGroup:
        return self.system.abstract

    @property
    def elements(self) -> list:
        return [w for i in sorted(self.grades) for w in self.grades[i]]

    def grade_of(self, w: AffineWeylElement) -> int:
        W = self.group
        if self.kind == "one_sided":
            return W.length(w)
        if self.kind == "twisted":
            return W.twisted_length(w, self.twist)
        return W.semi_infinite_length(w)

    def edges(self) -> list[tuple]:
        out = [(w, v) for w, below in self.down.items() for v in below]
        out.sort(key=lambda e: (e[0].sort_key(), e[1].sort_key()))
        return out

    def dot_weight(self, w: AffineWeylElement) -> AffineWeight:
        return self.system.dot(w, self.weight)


def elements_up_to_length(W: AffineWeylGroup, max_length: int) -> list[list[AffineWeylElement]]:
    """Layers of W by length 0..max_length."""
    layers = [[W.identity()]]
    seen = {W.identity()}
    for n in range(max_length):
        nxt = []
        for w in layers[-1]:
            for i in range(W.rank + 1):
                v = W.s(i) * w
                if v not in seen and W.length(v) == n + 1:
                    seen.add(v)
                    nxt.append(v)
        nxt.sort(key=lambda v: v.sort_key())
        layers.append(nxt)
    return layers


def _two_sided_down(W: AffineWeylGroup, elements, max_delta: int) -> dict:
    members = set(elements)
    grade = {w: W.semi_infinite_length(w) for w in elements}
    refl = [W.reflection(r) for r in _window_roots(W, max_delta)]
    down = {}
    for w in elements:
        below = []
        for s in refl:
            v = s * w
            if v in members and grade[v] == grade[w] + 1 and semi_infinite_leq(W, w, v):
                below.append(v)
        down[w] = sorted(set(below), key=lambda v: v.sort_key())
    return down


def _window_roots(W: AffineWeylGroup, max_delta: int):
    from .affine_weyl import AffineRoot

    return [AffineRoot(a, n) for a in W.rs.positive_roots for n in range(-max_delta, max_delta + 1)]


def build_complex(
    system: IntegralSystem,
    kind: str,
    *,
    weight: AffineWeight | None = None,
    max_length: int = 4,
    twist: AffineWeylElement | None = None,
    window: EnumWindow | None = None,
    grade_range: tuple[int, int] | None = None,
    check_dominance: bool = True,
) -> ComplexTruncation:
    """Build a truncation of a complex of kind ``kind``.

    one_sided / twisted: all elements with (twisted) length <= max_length.
    two_sided: all elements in the translation window, optionally cut to grade_range.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown complex kind {kind!r}")
    W = system.abstract
    lam = weight if weight is not None else system.vacuum
    if check_dominance and kind != "twisted" and system.twist.is_identity() and not is_regular_dominant(system.ambient, lam):
        raise ValueError("the weight is not regular dominant")
    if kind == "one_sided":
        layers = elements_up_to_length(W, max_length)
        grades = {i: layer for i, layer in enumerate(layers)}
        down = {w: exact_down_covers(W, w) for layer in layers for w in layer}
        meta = {"max_length": max_length}
        y = None
    elif kind == "twisted":
        y = twist if twist is not None else W.identity()
        ly = W.length(y)
        layers = elements_up_to_length(W, max_length + ly)
        grades = defaultdict(list)
        down = {}
        for layer in layers:
            for u in layer:
                w = y * u
                grades[W.twisted_length(w, y)].append(w)
                down[w] = exact_twisted_down_covers(W, w, y)
        grades = {i: sorted(v, key=lambda x: x.sort_key()) for i, v in sorted(grades.items())}
        meta = {"max_length": max_length, "twist": W.format(y)}
    else:
        if window is None:
            raise ValueError("two-sided complexes need an EnumWindow")
        y = None
        elements = window_elements(W, window.max_translation_norm)
        if grade_range is not None:
            lo, hi = grade_range
            elements = [w for w in elements if lo <= W.semi_infinite_length(w) <= hi]
        if not any(W.semi_infinite_length(w) == 0 for w in elements):
            raise WindowError("window contains no element of grade 0")
        grades = defaultdict(list)
        for w in elements:
            grades[W.semi_infinite_length(w)].append(w)
        grades = {i: sorted(v, key=lambda x: x.sort_key()) for i, v in sorted(grades.items())}
        down = _two_sided_down(W, elements, window.max_delta)
        meta = dict(window.to_json())
        if grade_range is not None:
            meta["grade_range"] = list(grade_range)
    signs = solve_signs(down, meta)
    c = ComplexTruncation(system, lam, kind, y, grades, down, signs, meta)
    c.report = verify_d_squared(c)
    return c


# -- verification -------------------------------------------------------------------


def _paths_of_length_two(down: dict) -> dict:
    pairs = defaultdict(list)
    for w, mids in down.items():
        for v in mids:
            for x in down.get(v, ()):
                pairs[(w, x)].append(v)
    return pairs


def verify_d_squared(c: ComplexTruncation, search_delta: int | None = None) -> VerificationReport:
    """Classify grade-distance-2 pairs by their number of intermediates."""
    report = VerificationReport()
    signs = c.signs.signs
    for (w, x), mids in sorted(_paths_of_length_two(c.down).items(), key=lambda kv: (kv[0][0].sort_key(), kv[0][1].sort_key())):
        if len(mids) == 2:
            a, b = mids
            if signs[(w, a)] * signs[(a, x)] + signs[(w, b)] * signs[(b, x)] == 0:
                report.two_ok.append((w, x))
            else:
                report.failures.append((w, x, "signs do not cancel"))
        elif len(mids) == 1:
            if c.kind == "two_sided" and _has_outside_intermediate(c, w, x, mids[0], search_delta):
                report.window_truncated.append((w, x, mids[0]))
            else:
                report.one_module_level.append((w, x, mids[0]))
        else:
            report.failures.append((w, x, f"{len(mids)} intermediates"))
    report.square_failures = square_failures(c.down, signs)
    return report


def _has_outside_intermediate(c: ComplexTruncation, w, x, known, search_delta) -> bool:
    """Look for a second semi-infinite intermediate outside the translation window."""
    W = c.group
    delta = search_delta if search_delta is not None else 2 * c.window.get("max_delta", 1) + 2
    gw = W.semi_infinite_length(w)
    for r in _window_roots(W, delta):
        v = W.reflection(r) * w
        if v == known or W.semi_infinite_length(v) != gw + 1:
            continue
        if reflection_related(W, v, x) is None:
            continue
        if semi_infinite_leq(W, w, v) and semi_infinite_leq(W, v, x):
            return True
    return False


# -- compatible sign systems ---------------------------------------------------------


class CompatibleSignSystem:
    """Signs eps^0..eps^l for the twists y_i = s_{j_1}...s_{j_i} of a reduced word.

    Level 0 is a GF(2) solution on the usual order; level i is obtained from
    level i-1 through the four-case recursion in beta = y_{i-1}(alpha_{j_i}).
    """

    def __init__(self, system: IntegralSystem, word, max_grade: int = 2):
        W = system.abstract
        word = [int(j) for j in word]
        if any(not 0 <= j <= W.rank for j in word):
            raise ValueError("generator index out of range")
        if W.length(W.from_word(word)) != len(word):
            raise ValueError("word is not reduced")
        self.system = system
        self.W = W
        self.word = word
        self.max_grade = max_grade
        self.twists = [W.from_word(word[:i]) for i in range(len(word) + 1)]
        self.betas = [None] + [W.act_root(self.twists[i - 1], W.simple_root(word[i - 1])) for i in range(1, len(word) + 1)]
        self.base_length = max_grade + 3 * len(word) + 2
        layers = elements_up_to_length(W, self.base_length)
        down0 = {w: exact_down_covers(W, w) for layer in layers for w in layer}
        self.base = solve_signs(down0, {"max_length": self.base_length})
        self._memo: list[dict] = [dict(self.base.signs)] + [dict() for _ in word]

    @property
    def levels(self) -> int:
        return len(self.word)

    def is_cover(self, i: int, upper, lower) -> bool:
        W, y = self.W, self.twists[i]
        if W.twisted_length(upper, y) != W.twisted_length(lower, y) + 1:
            return False
        return reflection_related(W, upper, lower) is not None

    def down_covers(self, i: int, w) -> list:
        return exact_twisted_down_covers(self.W, w, self.twists[i])

    def sign(self, i: int, upper, lower) -> int:
        key = (upper, lower)
        memo = self._memo[i]
        if key in memo:
            return memo[key]
        if i == 0:
            raise RuntimeError("level-0 signs requested outside the solved range; raise max_grade headroom")
        W = self.W
        beta = self.betas[i]
        sb = W.reflection(beta)
        p1 = W.inverse_act_root(upper, beta).is_positive()
        p2 = W.inverse_act_root(lower, beta).is_positive()
        if p1 and p2:
            # I: the edge is also a cover one level down
            if not self.is_cover(i - 1, upper, lower):
                raise AssertionError("case I edge is not a cover at the previous level")
            value = self.sign(i - 1, upper, lower)
        elif p1 and lower == sb * upper:
            # II: orientation flips, sign is inherited
            if not self.is_cover(i - 1, lower, upper):
                raise AssertionError("case II edge is not reversed at the previous level")
            value = self.sign(i - 1, lower, upper)
        elif not p1 and not p2:
            # III: close the square (s_b upper, upper, s_b lower, lower)
            top, side = sb * upper, sb * lower
            value = -self.sign(i, top, upper) * self.sign(i, top, side) * self.sign(i, side, lower)
        elif not p1 and p2:
            # IV: close the square with top s_b upper and bottom lower
            top = sb * upper
            thirds = [v for v in self.down_covers(i, top) if v != upper and lower in self.down_covers(i, v)]
            if len(thirds) != 1:
                raise AssertionError(f"case IV expects one third vertex, found {len(thirds)}")
            w3 = thirds[0]
            value = -self.sign(i, top, w3) * self.sign(i, w3, lower) * self.sign(i, top, upper)
        else:
            raise AssertionError("excluded case: upper positive, lower negative, not a reflection pair")
        memo[key] = value
        return value

    def scope_down(self, i: int) -> dict:
        W, y = self.W, self.twists[i]
        ly = W.length(y)
        down = {}
        for layer in elements_up_to_length(W, self.max_grade + ly):
            for u in layer:
                w = y * u
                down[w] = self.down_covers(i, w)
        return down

    def assignment(self, i: int) -> SignAssignment:
        down = self.scope_down(i)
        signs = {(w, v): self.sign(i, w, v) for w, below in down.items() for v in below}
        return SignAssignment(signs, {"level": i, "twist": self.W.format(self.twists[i]), "max_grade": self.max_grade})

    def assignments(self) -> list[SignAssignment]:
        return [self.assignment(i) for i in range(self.levels + 1)]

    def verify(self) -> dict:
        """Check square anticommutation per level and inheritance between levels."""
        squares_bad = {}
        inherit_bad = []
        checked = 0
        for i in range(self.levels + 1):
            down = self.scope_down(i)
            signs = {(w, v): self.sign(i, w, v) for w, below in down.items() for v in below}
            squares_bad[i] = square_failures(down, signs)
            if i == 0:
                continue
            sb = self.W.reflection(self.betas[i])
            for (w1, w2), s in signs.items():
                p1 = self.W.inverse_act_root(w1, self.betas[i]).is_positive()
                p2 = self.W.inverse_act_root(w2, self.betas[i]).is_positive()
                if p1 and p2:
                    checked += 1
                    if s != self.sign(i - 1, w1, w2):
                        inherit_bad.append((i, w1, w2))
                elif w2 == sb * w1:
                    checked += 1
                    if s != self.sign(i - 1, w2, w1):
                        inherit_bad.append((i, w1, w2))
        ok = not inherit_bad and not any(squares_bad.values())
        return {"ok": ok, "square_failures": squares_bad, "inheritance_failures": inherit_bad, "inherited_edges": checked}


def compatible_sign_system(system: IntegralSystem, word, max_grade: int = 2) -> list[SignAssignment]:
    return CompatibleSignSystem(system, word, max_grade).assignments()


# -- hom predicates ---------------------------------------------------------------------


def hom_dimension(system: IntegralSystem, w, w2, y, regularity: str) -> int:
    """dim Hom between twisted Verma modules M^y(w.lam) -> M^y(w2.lam)."""
    W = system.abstract
    if regularity == "dominant":
        return int(twisted_leq(W, w, w2, y))
    if regularity == "antidominant":
        return int(twisted_leq(W, w2, w, y))
    raise ValueError("regularity must be 'dominant' or 'antidominant'")


@dataclass(frozen=True)
class WakimotoHom:
    dimension: int
    conjectural: bool


def wakimoto_hom_dimension(system: IntegralSystem, w, w2, regularity: str) -> WakimotoHom:
    """dim Hom between Wakimoto modules W(w.lam) -> W(w2.lam) as a semi-infinite order predicate."""
    W = system.abstract
    if regularity == "antidominant":
        return WakimotoHom(int(semi_infinite_leq(W, w2, w)), False)
    if regularity != "dominant":
        raise ValueError("regularity must be 'dominant' or 'antidominant'")
    if w == w2:
        return WakimotoHom(1, False)
    is_cov = (
        W.semi_infinite_length(w2) == W.semi_infinite_length(w) + 1
        and reflection_related(W, w, w2) is not None
        and semi_infinite_leq(W, w, w2)
    )
    if is_cov:
        return WakimotoHom(1, False)
    return WakimotoHom(int(semi_infinite_leq(W, w, w2)), True)


# -- export ----------------------------------------------------------------------------


def to_json(c: ComplexTruncation) -> dict:
    W = c.group
    A = c.system.ambient
    f = W.format
    grades = {str(i): [f(w) for w in ws] for i, ws in sorted(c.grades.items())}
    weights = {f(w): c.dot_weight(w).to_json() for w in c.elements}
    edges = [{"from": f(a), "to": f(b), "sign": c.signs.signs[(a, b)]} for a, b in c.edges()]
    rep = c.report
    return {
        "type": c.system.base.type_letter,
        "rank": c.system.base.rank,
        "level": la.fmt(c.system.level),
        "integral_type": c.system.abstract_type.label,
        "system_twist": A.format(c.system.twist),
        "lambda": c.weight.to_json(),
        "kind": c.kind,
        "twist": f(c.twist) if c.twist is not None else None,
        "window": c.window,
        "grades": grades,
        "weights": weights,
        "edges": edges,
        "verification": {
            "two_ok": [[f(a), f(b)] for a, b in rep.two_ok],
            "one_module_level": [[f(a), f(b), f(m)] for a, b, m in rep.one_module_level],
            "failures": [[f(a), f(b), why] for a, b, why in rep.failures] + [["square", *map(f, q)] for q in rep.square_failures],
            "window_truncated": [[f(a), f(b), f(m)] for a, b, m in rep.window_truncated],
        },
    }


def to_dot(c: ComplexTruncation) -> str:
    W = c.group
    lines = ["digraph complex {", "  rankdir=LR;"]
    names = {}
    for i, ws in sorted(c.grades.items()):
        lines.append(f"  subgraph grade_{i if i >= 0 else 'm' + str(-i)} {{ rank=same;")
        for w in ws:
            names[w] = f"n{len(names)}"
            lines.append(f'    {names[w]} [label="{W.format(w)}\\n({i})"];')
        lines.append("  }")
    for a, b in c.edges():
        s = c.signs.signs[(a, b)]
        lines.append(f'  {names[a]} -> {names[b]} [label="{"+" if s > 0 else "-"}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def verify_graph(data: dict) -> dict:
    """Re-verify an exported complex from its edges alone."""
    down = defaultdict(list)
    signs = {}
    for e in data["edges"]:
        down[e["from"]].append(e["to"])
        signs[(e["from"], e["to"])] = int(e["sign"])
        if e["sign"] not in (1, -1):
            raise ValueError("edge signs must be +1 or -1")
    pairs = defaultdict(list)
    for w, mids in down.items():
        for v in mids:
            for x in down.get(v, ()):
                pairs[(w, x)].append(v)
    two_ok, one, failures = [], [], []
    for (w, x), mids in sorted(pairs.items()):
        if len(mids) == 2:
            a, b = mids
            if signs[(w, a)] * signs[(a, x)] + signs[(w, b)] * signs[(b, x)] == 0:
                two_ok.append([w, x])
            else:
                failures.append([w, x, "signs do not cancel"])
        elif len(mids) == 1:
            one.append([w, x, mids[0]])
        else:
            # more than two paths: every pair of paths through a square must still cancel
            total = sum(signs[(w, v)] * signs[(v, x)] for v in mids)
            failures.append([w, x, f"{len(mids)} intermediates (sum {total})"])
    return {"two_ok": two_ok, "one_module_level": one, "failures": failures}


def parity_mismatches(system: IntegralSystem, elements) -> list:
    """Elements where (-1)^l and (-1)^(semi-infinite length) disagree."""
    W = system.abstract
    return [w for w in elements if (W.length(w) - W.semi_infinite_length(w)) % 2]


__all__ = [
    "ComplexTruncation",
    "VerificationReport",
    "WindowError",
    "build_complex",
    "verify_d_squared",
    "CompatibleSignSystem",
    "compatible_sign_system",
    "hom_dimension",
    "wakimoto_hom_dimension",
    "to_json",
    "to_dot",
    "verify_graph",
    "parity_mismatches",
]
