import itertools

import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_is_matroid, brute_rank, column_space_rank
from vonstaudt.atomic import Add, AtomicSystem, Mul
from vonstaudt.errors import MalformedInput
from vonstaudt.staudt import (
    CircuitFamily,
    Matroid,
    build_circuits,
    element_name,
    ground_set,
    in_family,
    is_matroid,
    is_weak_image,
    rank_of,
    simplify,
)

WEYL = AtomicSystem(5, [Mul(4, 2, 3), Mul(5, 3, 2), Add(4, 1, 5)])


def test_weyl_ground_set():
    fam = build_circuits(WEYL)
    assert len(fam.ground) == 19
    assert fam.ground[:3] == ("O", "xinf", "yinf")
    assert fam.ground[-1] == "r5"


def test_weyl_listed_circuits():
    fam = build_circuits(WEYL, implicit=False)
    expect = {
        ("x4", "y3", "z2"),
        ("x5", "y2", "z3"),
        ("y1", "r5", "xinf"),
        ("x5", "r5", "yinf"),
        ("x4", "r5", "z1"),
    }
    for c in expect:
        assert frozenset(c) in fam.circuits
    lines = 3 * 35  # three lines of 7 points each
    assert len(fam.circuits) == lines + len(expect)


def test_single_variable_example():
    fam = build_circuits(AtomicSystem(1, []))
    expect = {frozenset(c) for c in [("O", "xinf", "x1"), ("O", "yinf", "y1"), ("x1", "y1", "z1"), ("xinf", "yinf", "z1")]}
    assert fam.circuits == expect
    assert is_matroid(fam)
    assert rank_of(fam) == 3


def test_index_zero_substitution():
    assert [element_name(t, 0) for t in "xyzr"] == ["O", "O", "yinf", "y1"]
    fam = build_circuits(AtomicSystem(2, [Add(2, 0, 0)]), implicit=False)
    # Add(2,0,0): {y1, r0->y1, xinf} repeats y1 and is skipped; {x0, r0, yinf} -> {O, y1, yinf}
    assert frozenset({"O", "y1", "yinf"}) in fam.circuits
    assert frozenset({"x2", "y1", "yinf"}) in fam.circuits


def test_ground_set_orders_r_by_index():
    assert ground_set(2, [2, 1]) == ("O", "xinf", "yinf", "x1", "x2", "y1", "y2", "z1", "z2", "r1", "r2")


def test_implicit_weyl_family_is_not_a_matroid():
    check = is_matroid(build_circuits(WEYL))
    assert not check
    assert check.witness == (("x4", "y4", "z1"), ("x4", "z1", "r5"), "z1")


def test_literal_weyl_family_is_a_matroid():
    assert is_matroid(build_circuits(WEYL, implicit=False))


@pytest.mark.parametrize(
    "eq,witness",
    [
        (Mul(3, 3, 2), (("x3", "y1", "z3"), ("x3", "y2", "z3"), "z3")),
        (Mul(3, 2, 3), (("x3", "y3", "z1"), ("x3", "y3", "z2"), "y3")),
    ],
)
def test_self_referencing_products_break_the_axioms(eq, witness):
    atomic = AtomicSystem(3, [eq])
    assert is_matroid(build_circuits(atomic)).witness == witness
    assert is_matroid(build_circuits(atomic, implicit=False))


def test_witness_for_nested_circuits():
    fam = CircuitFamily("abcd", [("a", "b"), ("a", "b", "c")])
    check = is_matroid(fam)
    assert not check and check.witness == (("a", "b"), ("a", "b", "c"), None)


small_ground = "abcdefg"
family = st.lists(
    st.sets(st.sampled_from(small_ground), min_size=1, max_size=4).map(frozenset),
    min_size=0,
    max_size=6,
    unique=True,
)


@settings(max_examples=300, deadline=None)
@given(family)
def test_is_matroid_matches_brute_force(circuits):
    fam = CircuitFamily(small_ground, circuits)
    assert bool(is_matroid(fam)) == brute_is_matroid(small_ground, circuits)


def _vector_circuits(vectors, p):
    circuits = []
    n = len(vectors)
    for size in range(1, n + 1):
        for s in itertools.combinations(range(n), size):
            sub = [vectors[i] for i in s]
            rows = [list(r) for r in zip(*sub)]
            if column_space_rank(rows, p) < size and not any(set(c) < set(s) for c in circuits):
                circuits.append(s)
    return [[small_ground[i] for i in c] for c in circuits]


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(*[st.integers(0, 1)] * 3), min_size=3, max_size=6))
def test_vector_configurations_are_matroids(vectors):
    circuits = _vector_circuits(vectors, 2)
    ground = small_ground[: len(vectors)]
    fam = CircuitFamily(ground, circuits)
    assert is_matroid(fam)
    for size in range(len(ground) + 1):
        for s in itertools.combinations(ground, size):
            assert rank_of(fam, s) == brute_rank(ground, circuits, s)


def test_rank_values():
    m = build_circuits(WEYL, implicit=False)
    assert rank_of(m, []) == 0
    assert rank_of(m, ["x4", "y3"]) == 2
    assert rank_of(m, ["x4", "y3", "z2"]) == 2
    assert rank_of(m) == 3
    with pytest.raises(MalformedInput):
        rank_of(m, ["w9"])


def test_closure_four_is_implicit():
    m = build_circuits(WEYL, implicit=False)
    assert m.contains_circuit(["x2", "x3", "y2", "z4"])
    assert not m.contains_circuit(["x2", "y2", "z4"])
    assert len(m.all_circuits()) > len(m.circuits)


def test_json_roundtrip():
    m = build_circuits(WEYL)
    back = CircuitFamily.from_json(m.to_json())
    assert back == m and back.closure_size == 4


def test_weak_image():
    ground = "abcd"
    fine = CircuitFamily(ground, [("a", "b", "c")])
    coarse = CircuitFamily(ground, [("a", "b")])
    assert is_weak_image(coarse, fine)
    assert not is_weak_image(fine, coarse)
    assert is_weak_image(fine, fine)
    with pytest.raises(MalformedInput):
        is_weak_image(fine, CircuitFamily("abc", []))


def test_literal_family_is_in_its_own_family():
    literal = Matroid(*_parts(build_circuits(WEYL, implicit=False)))
    check = in_family(literal, WEYL, principal=build_circuits(WEYL, implicit=False))
    assert check, check.reasons


def _parts(fam):
    return fam.ground, fam.circuits, fam.closure_size


def _extend(fam, extra):
    ground, circuits, k = _parts(fam)
    return CircuitFamily(ground, set(circuits) | {frozenset(c) for c in extra}, k)


def test_in_family_condition_tags():
    principal = build_circuits(WEYL, implicit=False)
    loop = _extend(principal, [("x3",)])
    assert "condition 1" in in_family(loop, WEYL, principal).reasons
    frame = _extend(principal, [("O", "x1", "y1")])
    assert "condition 2" in in_family(frame, WEYL, principal).reasons
    parallel = _extend(principal, [("x2", "xinf")])
    assert "condition 3" in in_family(parallel, WEYL, principal).reasons
    missing = CircuitFamily(principal.ground, [], 4)
    assert "weak-image" in in_family(missing, WEYL, principal).reasons


def test_simplify():
    fam = CircuitFamily("abcd", [("a", "c"), ("b", "c", "d"), ("a", "b", "d")])
    s = simplify(fam)
    assert s.ground == ("a", "b", "d")
    assert s.circuits == {frozenset("abd")}
    with pytest.raises(MalformedInput):
        simplify(CircuitFamily("ab", [("a",)]))
