"""Exact shuffle-algebra computations: words, shuffles, tableau invariants,
determinants and Pfaffians over commutative rings, and path signatures."""

from .free_algebra import AlphabetError, FormalSum, Permutation, act, concat, permute_positions
from .invariants import Tableau, check_sign_equivariance, h_generators, inv, row_word, t_one, t_two
from .matrices import (
    RATIONALS,
    AlgMatrix,
    andreief_rhs,
    anti_part,
    block_concat_form,
    build_W,
    build_Z,
    det,
    det_skew_plus_rank1,
    pfaffian,
    pfaffian_by_permutations,
    shuffle_ring,
    sym_part,
)
from .shuffle import half_shuffle, half_shuffle_chain, shuffle, shuffle_many, shuffle_power

__version__ = "0.1.0"
