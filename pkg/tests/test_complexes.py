from __future__ import annotations

import json
from fractions import Fraction

import jsonschema
import pytest

from affine_bgg import load_schema
from affine_bgg.admissible import IntegralSystem, enumerate_pr_plus
from affine_bgg.bruhat import EnumWindow, semi_infinite_leq, twisted_leq
from affine_bgg.complexes import (
    CompatibleSignSystem,
    ComplexTruncation,
    WindowError,
    build_complex,
    compatible_sign_system,
    hom_dimension,
    parity_mismatches,
    to_dot,
    to_json,
    verify_d_squared,
    verify_graph,
    wakimoto_hom_dimension,
)
from affine_bgg.root_system import build_root_system
from affine_bgg.signs import SignAssignment, solve_signs, square_failures

A1 = build_root_system("A", 1)
A2 = build_root_system("A", 2)
B2 = build_root_system("B", 2)
HALF = Fraction(-1, 2)


@pytest.fixture(scope="module")
def a1_half():
    return IntegralSystem(A1, HALF)


@pytest.fixture(scope="module")
def a1_two_sided(a1_half):
    return build_complex(a1_half, "two_sided", window=EnumWindow(6, 6), grade_range=(-6, 6))


def bfs_length_counts(W, max_len):
    """Number of elements per length, by breadth-first search on right multiplication."""
    seen = {W.identity()}
    frontier = [W.identity()]
    counts = [1]
    for _ in range(max_len):
        nxt = set()
        for w in frontier:
            for i in range(W.rank + 1):
                v = w * W.s(i)
                if v not in seen:
                    nxt.add(v)
        seen |= nxt
        frontier = list(nxt)
        counts.append(len(nxt))
    return counts


def test_one_sided_a1_integrable():
    c = build_complex(IntegralSystem(A1, 1), "one_sided", max_length=4)
    assert [len(c.grades[i]) for i in range(5)] == [1, 2, 2, 2, 2]
    assert c.report.ok and c.report.failures == []
    for a, b in c.edges():
        assert c.grade_of(a) == c.grade_of(b) + 1


@pytest.mark.parametrize("rs,k", [(A1, 1), (A2, 1), (B2, 0), (A2, Fraction(-3, 2))])
def test_one_sided_grades_match_bfs(rs, k):
    s = IntegralSystem(rs, k)
    c = build_complex(s, "one_sided", max_length=4)
    assert [len(c.grades[i]) for i in range(5)] == bfs_length_counts(s.abstract, 4)


@pytest.mark.parametrize("rs,k", [(A2, Fraction(-3, 2)), (B2, HALF), (A2, 1)])
def test_one_sided_and_twisted_squares_cancel(rs, k):
    s = IntegralSystem(rs, k)
    c = build_complex(s, "one_sided", max_length=4)
    assert c.report.failures == [] and c.report.square_failures == []
    assert c.report.one_module_level == []
    W = s.abstract
    for y in (W.s(0), W.from_word([0, 1]), W.from_word([1, 2, 1])):
        t = build_complex(s, "twisted", twist=y, max_length=3)
        assert t.report.ok and t.report.one_module_level == []
        assert min(t.grades) == -W.length(y)
        for a, b in t.edges():
            assert W.twisted_length(a, y) == W.twisted_length(b, y) + 1
            assert twisted_leq(W, a, b, y)


def test_twisted_by_identity_equals_one_sided(a1_half):
    one = build_complex(a1_half, "one_sided", max_length=4)
    tw = build_complex(a1_half, "twisted", twist=a1_half.abstract.identity(), max_length=4)
    assert one.grades == tw.grades
    assert one.down == tw.down
    assert one.signs.signs == tw.signs.signs


def test_two_sided_a1_singletons(a1_two_sided):
    c = a1_two_sided
    assert sorted(c.grades) == list(range(-6, 7))
    assert all(len(ws) == 1 for ws in c.grades.values())
    edges = c.edges()
    assert len(edges) == 12
    # a path: every element has at most one edge in each direction
    for w in c.elements:
        assert sum(1 for a, _ in edges if a == w) <= 1
        assert sum(1 for _, b in edges if b == w) <= 1


def test_two_sided_a1_module_level_pair(a1_half, a1_two_sided):
    W = a1_half.abstract
    e, s1, t = W.identity(), W.s(1), W.coroot_translation([-1])
    rep = a1_two_sided.report
    assert (e, t, s1) in rep.one_module_level
    assert rep.failures == [] and rep.two_ok == []
    assert rep.window_truncated == []


def test_two_sided_edges_are_semi_infinite_covers(a1_half):
    s = IntegralSystem(A2, Fraction(-3, 2))
    c = build_complex(s, "two_sided", window=EnumWindow(1, 2), grade_range=(-2, 2))
    W = s.abstract
    for a, b in c.edges():
        assert W.semi_infinite_length(b) == W.semi_infinite_length(a) + 1
        assert semi_infinite_leq(W, a, b)
    assert c.report.failures == []


def test_two_sided_window_must_contain_grade_zero(a1_half):
    with pytest.raises(WindowError):
        build_complex(a1_half, "two_sided", window=EnumWindow(2, 2), grade_range=(5, 7))
    with pytest.raises(ValueError):
        build_complex(a1_half, "two_sided")
    with pytest.raises(ValueError):
        build_complex(a1_half, "sideways")


def test_two_sided_monotone_under_window_growth():
    s = IntegralSystem(A2, Fraction(-3, 2))
    small = build_complex(s, "two_sided", window=EnumWindow(1, 2))
    large = build_complex(s, "two_sided", window=EnumWindow(2, 3))
    for i, ws in small.grades.items():
        assert set(ws) <= set(large.grades.get(i, []))
    small_edges = set(small.edges())
    large_edges = set(large.edges())
    inside = set(small.elements)
    assert small_edges <= {e for e in large_edges if e[0] in inside and e[1] in inside}


@pytest.mark.parametrize("rs,k", [(A1, HALF), (A2, Fraction(-3, 2)), (B2, HALF)])
def test_parity_bridge(rs, k):
    s = IntegralSystem(rs, k)
    c = build_complex(s, "two_sided", window=EnumWindow(2, 2))
    assert parity_mismatches(s, c.elements) == []
    one = build_complex(s, "one_sided", max_length=5)
    assert parity_mismatches(s, one.elements) == []


def test_dominance_is_checked():
    s = IntegralSystem(A1, HALF)
    bad = s.ambient.weight((Fraction(-3),), level=HALF)
    with pytest.raises(ValueError):
        build_complex(s, "one_sided", weight=bad)
    for lam in enumerate_pr_plus(HALF, A1):
        assert build_complex(s, "one_sided", weight=lam.weight, max_length=2).report.ok


def test_empty_complex_has_empty_report(a1_half):
    c = ComplexTruncation(a1_half, a1_half.vacuum, "one_sided", None, {}, {}, SignAssignment({}), {})
    rep = verify_d_squared(c)
    assert rep.ok
    assert (rep.two_ok, rep.one_module_level, rep.failures, rep.window_truncated) == ([], [], [], [])


def test_window_truncated_class_is_detected():
    s = IntegralSystem(A2, Fraction(-3, 2))
    c = build_complex(s, "two_sided", window=EnumWindow(1, 1))
    rep = c.report
    assert rep.failures == []
    assert rep.window_truncated
    # enlarging the edge search turns those pairs into cancelling diamonds
    wider = build_complex(s, "two_sided", window=EnumWindow(1, 2))
    assert len(wider.report.two_ok) > len(rep.two_ok)
    assert len(wider.report.window_truncated) < len(rep.window_truncated)


# -- compatible sign systems ----------------------------------------------------------


def test_compatible_signs_identity_word(a1_half):
    out = compatible_sign_system(a1_half, [], max_grade=3)
    assert len(out) == 1
    sys0 = CompatibleSignSystem(a1_half, [], max_grade=3)
    down = sys0.scope_down(0)
    assert square_failures(down, out[0].signs) == []
    solved = solve_signs({w: v for w, v in down.items()})
    assert set(solved.signs) == set(out[0].signs)


@pytest.mark.parametrize("word", [[0], [1], [0, 1], [1, 0], [0, 1, 0], [1, 0, 1]])
def test_compatible_signs_a1(a1_half, word):
    css = CompatibleSignSystem(a1_half, word, max_grade=2)
    result = css.verify()
    assert result["ok"], result
    assert len(css.assignments()) == len(word) + 1
    assert result["inherited_edges"] > 0


def test_compatible_signs_case_two_flips(a1_half):
    W = a1_half.abstract
    css = CompatibleSignSystem(a1_half, [0], max_grade=2)
    beta = css.betas[1]
    sb = W.reflection(beta)
    flipped = 0
    for (w1, w2), sign in css.assignment(1).signs.items():
        if w2 == sb * w1 and W.inverse_act_root(w1, beta).is_positive():
            flipped += 1
            assert sign == css.sign(0, w2, w1)
    assert flipped > 0


@pytest.mark.parametrize("word", [[1, 2], [0, 1, 2], [1, 2, 1]])
def test_compatible_signs_a2(word):
    css = CompatibleSignSystem(IntegralSystem(A2, Fraction(-3, 2)), word, max_grade=2)
    assert css.verify()["ok"]


def test_compatible_signs_reject_bad_words(a1_half):
    with pytest.raises(ValueError):
        CompatibleSignSystem(a1_half, [0, 0])
    with pytest.raises(ValueError):
        CompatibleSignSystem(a1_half, [2])


# -- hom predicates -------------------------------------------------------------------


def test_hom_dimension_examples(a1_half):
    W = a1_half.abstract
    e, s0 = W.identity(), W.s(0)
    assert hom_dimension(a1_half, s0, e, e, "dominant") == 1
    assert hom_dimension(a1_half, e, s0, e, "dominant") == 0
    assert hom_dimension(a1_half, e, s0, e, "antidominant") == 1
    for w in (e, s0, W.from_word([1, 0])):
        assert hom_dimension(a1_half, w, w, W.s(1), "dominant") == 1
    with pytest.raises(ValueError):
        hom_dimension(a1_half, e, e, e, "sideways")


def test_wakimoto_hom_examples(a1_half, a1_two_sided):
    W = a1_half.abstract
    e, s1 = W.identity(), W.s(1)
    assert wakimoto_hom_dimension(a1_half, e, e, "dominant").dimension == 1
    anti = wakimoto_hom_dimension(a1_half, e, s1, "antidominant")
    assert anti.dimension == int(semi_infinite_leq(W, s1, e)) and not anti.conjectural
    for a, b in a1_two_sided.edges():
        hom = wakimoto_hom_dimension(a1_half, a, b, "dominant")
        assert hom.dimension == 1 and not hom.conjectural
    far = wakimoto_hom_dimension(a1_half, e, W.coroot_translation([-1]), "dominant")
    assert far.conjectural


# -- export --------------------------------------------------------------------------


def test_dot_node_count(a1_two_sided):
    dot = to_dot(a1_two_sided)
    assert dot.count("[label=\"") - dot.count(" -> ") == len(a1_two_sided.elements)
    assert dot.count(" -> ") == len(a1_two_sided.edges())


@pytest.mark.parametrize("kind", ["one_sided", "twisted", "two_sided"])
def test_json_validates_and_reverifies(a1_half, kind):
    W = a1_half.abstract
    c = build_complex(a1_half, kind, max_length=3, twist=W.s(0) if kind == "twisted" else None, window=EnumWindow(3, 3))
    data = json.loads(json.dumps(to_json(c)))
    jsonschema.validate(data, load_schema("complex"))
    again = verify_graph(data)
    assert again["failures"] == []
    assert len(again["two_ok"]) == len(c.report.two_ok)
    assert len(again["one_module_level"]) == len(c.report.one_module_level) + len(c.report.window_truncated)


def test_verify_graph_flags_bad_signs():
    data = {
        "edges": [
            {"from": "a", "to": "b", "sign": 1},
            {"from": "a", "to": "c", "sign": 1},
            {"from": "b", "to": "d", "sign": 1},
            {"from": "c", "to": "d", "sign": 1},
        ]
    }
    assert verify_graph(data)["failures"] == [["a", "d", "signs do not cancel"]]
    data["edges"][3]["sign"] = -1
    assert verify_graph(data)["two_ok"] == [["a", "d"]]
