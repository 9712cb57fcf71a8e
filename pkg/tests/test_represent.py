import random

import pytest

from oracles import random_frame_move, random_solved_system
from vonstaudt.atomic import Add, AtomicSystem, Mul
from vonstaudt.casebook import weyl_representation, weyl_solution, weyl_system
from vonstaudt.errors import (
    ArrangementError,
    ExtractionError,
    FrameError,
    GuardExceeded,
    NotASolution,
    NotInvertible,
    ShapeMismatch,
)
from vonstaudt.exactalg import GF, QQ, ExactMatrix, FpXY, random_invertible
from vonstaudt.represent import (
    FrameTransform,
    Representation,
    build_representation,
    extract_solution,
    induced_matroid,
    normalize_frame,
    verify_arrangement,
)
from vonstaudt.staudt import build_circuits, in_family, is_matroid


def _scalar_rep_columns(rep):
    return {e: tuple(int(x) for x in rep.column(e).entries) for e in rep.labels}


def test_single_variable_columns_over_q():
    rep = build_representation(AtomicSystem(1, []), {1: ExactMatrix.identity(QQ, 1)})
    assert _scalar_rep_columns(rep) == {
        "O": (1, 0, 0),
        "xinf": (0, 1, 0),
        "yinf": (0, 0, 1),
        "x1": (1, 1, 0),
        "y1": (1, 0, 1),
        "z1": (0, 1, -1),
    }


def test_addition_gadget_columns():
    a = AtomicSystem(2, [Add(2, 1, 1)])
    rep = build_representation(a, {1: ExactMatrix.identity(QQ, 1), 2: ExactMatrix.scalar(QQ, 1, 2)})
    cols = _scalar_rep_columns(rep)
    assert cols["r1"] == (1, 1, 1)
    assert cols["x2"] == (1, 2, 0)
    assert cols["z2"] == (0, 2, -1)


# --- the displayed W, transcribed block by block -----------------------------------------

W_HEADER = "O xinf yinf x1 x2 x3 x4 x5 y1 y2 y3 y4 y5 z1 z2 z3 z4 z5 r5".split()
W_ROWS = [
    "I . . I I I I I I I I I I . . . . . I",
    ". I . I A B AB BA . . . . . I A B AB BA BA",
    ". . I . . . . . I A B AB BA -I -I -I -I -I I",
]


def _displayed_ab(p):
    F = FpXY(p)
    lam, mu = F.gen(0), F.gen(1)
    a = [[lam if i == j else (F(j) if j == i + 1 else F.zero) for j in range(p)] for i in range(p)]
    b = [[F.one if i == j + 1 else F.zero for j in range(p)] for i in range(p)]
    b[0][p - 1] = mu
    return F, ExactMatrix.from_rows(F, a), ExactMatrix.from_rows(F, b)


@pytest.mark.parametrize("p", [2, 3])
def test_weyl_representation_matches_display(p):
    F, a, b = _displayed_ab(p)
    eye = ExactMatrix.identity(F, p)
    sym = {"I": eye, ".": ExactMatrix.zeros(F, p), "-I": -eye, "A": a, "B": b, "AB": a @ b, "BA": b @ a}
    rep = weyl_representation(p)
    assert list(rep.labels) == W_HEADER
    assert rep.matrix.base.shape == (3 * p, 19 * p)
    for i, row in enumerate(W_ROWS):
        for label, token in zip(W_HEADER, row.split()):
            assert rep.block(i, label) == sym[token], (i, label)


def test_products_match_display_p3():
    F, a, b = _displayed_ab(3)
    lam, mu = F.gen(0), F.gen(1)
    z = F.zero
    ab = [[F(1), z, lam * mu], [lam, F(2), z], [z, lam, F(0)]]
    ba = [[z, z, lam * mu], [lam, F(1), z], [z, lam, F(2)]]
    assert a @ b == ExactMatrix.from_rows(F, ab)
    assert b @ a == ExactMatrix.from_rows(F, ba)


def test_three_standard_columns_have_full_rank():
    rep = weyl_representation(2)
    assert rep.subset_rank(["O", "xinf", "yinf"]) == 6


def test_weyl_sweep_p2():
    rep = weyl_representation(2)
    report = verify_arrangement(rep, depth=3)
    assert report.ok
    hist = report.histogram()
    assert hist[2] == {4: 171}
    assert set(hist[3]) == {4, 6} and sum(hist[3].values()) == 969
    assert report.ranks[("x4", "z1", "r5")] == 4


def test_parallel_sweep_agrees():
    rep = weyl_representation(2)
    assert verify_arrangement(rep, 2, jobs=2).ranks == verify_arrangement(rep, 2, jobs=1).ranks


def test_induced_weyl_matroid_is_in_the_family():
    m = induced_matroid(weyl_representation(2))
    assert is_matroid(m)
    assert in_family(m, weyl_system())
    assert in_family(m, weyl_system(), principal=build_circuits(weyl_system(), implicit=False))


def test_exhaustive_depth_guard():
    with pytest.raises(GuardExceeded):
        verify_arrangement(weyl_representation(2), depth="all")
    small = build_representation(AtomicSystem(1, []), {1: ExactMatrix.identity(QQ, 1)})
    report = verify_arrangement(small, depth="all")
    assert report.ranks[tuple(small.labels)] == 3


def test_rank_deficient_block_is_reported():
    F = GF(5)
    rep = build_representation(AtomicSystem(1, []), {1: ExactMatrix.identity(F, 2)})
    bad = ExactMatrix.vstack([ExactMatrix.from_rows(F, [[1, 0], [0, 0]]), ExactMatrix.zeros(F, 2), ExactMatrix.zeros(F, 2)])
    cols = [bad if e == "x1" else rep.column(e) for e in rep.labels]
    broken = Representation.from_columns(rep.labels, cols)
    report = verify_arrangement(broken, depth=2)
    assert (("x1",), 1, "singleton rank is not c") in report.violations
    with pytest.raises(ArrangementError):
        induced_matroid(broken, report)


def test_parallel_columns_become_a_two_circuit():
    e = [ExactMatrix.from_rows(QQ, [[1], [0], [0]]), ExactMatrix.from_rows(QQ, [[0], [1], [0]])]
    rep = Representation.from_columns(["a", "b", "c"], [e[0], e[1], e[0] * 3])
    m = induced_matroid(rep)
    assert frozenset({"a", "c"}) in m.circuits


def test_normalize_is_identity_on_weyl():
    rep = weyl_representation(2)
    out, transform = normalize_frame(rep)
    assert transform.is_identity()
    assert out == rep


def test_roundtrip_weyl():
    for p in (2, 3):
        assert extract_solution(weyl_representation(p), weyl_system()) == weyl_solution(p)


@pytest.mark.parametrize("field,c", [(QQ, 1), (GF(5), 2), (GF(3), 3)])
def test_roundtrip_random_systems(field, c):
    rng = random.Random(11 * c)
    for _ in range(4):
        atomic, sol = random_solved_system(field, c, rng)
        rep = build_representation(atomic, sol)
        assert extract_solution(rep, atomic) == sol


def test_frame_moves_conjugate_the_solution():
    rng = random.Random(5)
    F = GF(5)
    for _ in range(10):
        atomic, sol = random_solved_system(F, 2, rng)
        rep = build_representation(atomic, sol)
        left, right = random_frame_move(rep.labels, F, 2, rng)
        moved = FrameTransform(left, right).apply(rep)
        got = extract_solution(moved, atomic)
        s = right["O"]
        assert got == {i: s.inverse() @ v @ s for i, v in sol.items()}
        # a left move alone never changes the reading
        assert extract_solution(FrameTransform(left).apply(rep), atomic) == sol


def test_extraction_accepts_permuted_columns():
    rep = weyl_representation(2)
    labels = list(reversed(rep.labels))
    shuffled = Representation.from_columns(labels, [rep.column(e) for e in labels])
    assert extract_solution(shuffled, weyl_system()) == weyl_solution(2)


def test_build_errors():
    F = GF(5)
    with pytest.raises(NotASolution):
        build_representation(weyl_system(), {i: ExactMatrix.identity(F, 2) for i in range(1, 6)})
    singular = ExactMatrix.from_rows(F, [[1, 0], [0, 0]])
    with pytest.raises(NotInvertible):
        build_representation(AtomicSystem(2, []), {1: ExactMatrix.identity(F, 2), 2: singular})


def test_extraction_errors():
    one = ExactMatrix.identity(QQ, 1)
    rep = build_representation(AtomicSystem(1, []), {1: one})
    collapsed = Representation.from_columns(rep.labels, [rep.column("O") if e == "x1" else rep.column(e) for e in rep.labels])
    with pytest.raises(FrameError):
        extract_solution(collapsed, AtomicSystem(1, []))

    a = AtomicSystem(2, [])
    rep2 = build_representation(a, {1: one, 2: ExactMatrix.scalar(QQ, 1, 2)})
    off = ExactMatrix.from_rows(QQ, [[1], [2], [1]])
    moved = Representation.from_columns(rep2.labels, [off if e == "x2" else rep2.column(e) for e in rep2.labels])
    with pytest.raises(ExtractionError):
        extract_solution(moved, a)

    doubled = AtomicSystem(2, [Add(2, 1, 1)])
    fake = build_representation(doubled, {1: one, 2: ExactMatrix.scalar(QQ, 1, 3)}, check=False)
    with pytest.raises(NotASolution):
        extract_solution(fake, doubled)


def test_weyl_system_over_q_scalars_is_not_a_solution():
    one = ExactMatrix.identity(QQ, 1)
    vals = {1: one, 2: one * 2, 3: one * 3, 4: one * 6, 5: one * 6}
    with pytest.raises(NotASolution):
        build_representation(weyl_system(), vals)
    rep = build_representation(weyl_system(), vals, check=False)
    with pytest.raises(NotASolution):
        extract_solution(rep, weyl_system())


def test_json_roundtrip_and_truncation():
    rep = weyl_representation(2)
    data = rep.to_json()
    assert Representation.from_json(data) == rep
    data["rows"], data["entries"] = 4, data["entries"][:4]
    with pytest.raises(ShapeMismatch):
        Representation.from_json(data)


def test_multiplication_circuit_rank():
    F = GF(5)
    rng = random.Random(3)
    atomic = AtomicSystem(4, [Mul(4, 2, 3)])
    a2, a3 = random_invertible(F, 2, rng), random_invertible(F, 2, rng)
    sol = {1: ExactMatrix.identity(F, 2), 2: a2, 3: a3, 4: a2 @ a3}
    rep = build_representation(atomic, sol)
    assert rep.subset_rank(["x4", "y3", "z2"]) == 4
