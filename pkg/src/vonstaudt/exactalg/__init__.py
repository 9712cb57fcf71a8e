"""Exact fields, dense matrices and exact rank."""

from .bipoly import BiPolynomial, RationalFunction, gcd_bipoly
from .blockrank import assemble_lemma_block, lemma_block_rank
from .fields import GF, QQ, FieldSpec, Fp, FpXY, parse_field
from .matrix import (
    BlockMatrix,
    ExactMatrix,
    bareiss_rank,
    block_column_minor,
    random_invertible,
    random_matrix,
    rank,
    solve,
)

__all__ = [
    "BiPolynomial",
    "RationalFunction",
    "gcd_bipoly",
    "FieldSpec",
    "Fp",
    "QQ",
    "GF",
    "FpXY",
    "parse_field",
    "ExactMatrix",
    "BlockMatrix",
    "rank",
    "bareiss_rank",
    "block_column_minor",
    "solve",
    "random_matrix",
    "random_invertible",
    "lemma_block_rank",
    "assemble_lemma_block",
]
