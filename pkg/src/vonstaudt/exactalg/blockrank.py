"""Closed-form ranks of three small block matrices built from invertible blocks.

With ``I`` the identity and ``M1, M2, M3`` invertible ``k x k`` matrices:

* case ``"i"``:   ``[[I, I], [M1, M2]]``                       has rank ``k + rk(M1 - M2)``
* case ``"ii"``:  ``[[I, I, 0], [M1, 0, M3], [0, M2, -I]]``     has rank ``2k + rk(M3 M2 - M1)``
* case ``"iii"``: ``[[I, I, I], [M1, 0, M3], [0, M2, I]]``      has rank ``2k + rk(M1 + M3 M2 - M1 M2)``

Each formula follows from block column operations; ``assemble_lemma_block``
builds the literal matrix so the two routes can be compared.
"""

from __future__ import annotations

from ..errors import FieldMismatch, NotInvertible, ShapeMismatch
from .matrix import ExactMatrix

__all__ = ["lemma_block_rank", "assemble_lemma_block"]

_NEEDS = {"i": 2, "ii": 3, "iii": 3}


def _validate(case, mats, k):
    if case not in _NEEDS:
        raise ValueError(f"unknown case {case!r}")
    need = mats[: _NEEDS[case]]
    if any(m is None for m in need):
        raise ValueError(f"case {case} needs {_NEEDS[case]} matrices")
    field = need[0].field
    for m in need:
        if m.field != field:
            raise FieldMismatch("blocks over different fields")
        if m.shape != (k, k):
            raise ShapeMismatch(f"expected {k}x{k} blocks, got {m.shape}")
        if not m.is_invertible():
            raise NotInvertible("every block must be invertible")
    return field, need


def assemble_lemma_block(case, m1, m2, m3=None):
    k = m1.rows
    field, _ = _validate(case, (m1, m2, m3), k)
    eye = ExactMatrix.identity(field, k)
    zero = ExactMatrix.zeros(field, k)
    if case == "i":
        grid = [[eye, eye], [m1, m2]]
    elif case == "ii":
        grid = [[eye, eye, zero], [m1, zero, m3], [zero, m2, -eye]]
    else:
        grid = [[eye, eye, eye], [m1, zero, m3], [zero, m2, eye]]
    return ExactMatrix.block(grid)


def lemma_block_rank(case, m1, m2, m3=None, k=None):
    """Rank of the case-``case`` block matrix via its closed form."""
    k = m1.rows if k is None else k
    _validate(case, (m1, m2, m3), k)
    if case == "i":
        return k + (m1 - m2).rank()
    if case == "ii":
        return 2 * k + (m3 @ m2 - m1).rank()
    return 2 * k + (m1 + m3 @ m2 - m1 @ m2).rank()
