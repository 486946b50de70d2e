import numpy as np
import pytest

from qbench.braid import BraidWord, concat, random_braid
from qbench.fibonacci import CONSTANTS
from qbench.jones import (
    jones_trace_closure,
    markov_move_check,
    tl_image,
    tl_relation_check,
    trace_normalizer,
    weighted_trace,
)

C = CONSTANTS


@pytest.mark.parametrize("n", range(1, 11))
def test_identity_trace_is_one(n):
    assert abs(weighted_trace(BraidWord(n)).value - 1) <= 1e-12


def test_dense_and_vector_paths_agree():
    b = random_braid(5, 8, np.random.default_rng(0))
    assert abs(weighted_trace(b, dense=True).value - weighted_trace(b, dense=False).value) < 1e-12


@pytest.mark.parametrize("n", range(2, 7))
def test_tl_relations(n):
    assert tl_relation_check(tl_image(n), 1e-10).passed


def test_unknot_and_trefoil():
    # one-crossing closures are unknots; the trefoil value is V(t) at t = exp(2πi/5)
    assert abs(jones_trace_closure(BraidWord(2, (1,))).value - 1) < 1e-12
    assert abs(jones_trace_closure(BraidWord(2, (-1,))).value - 1) < 1e-12
    # under this crossing convention the closure of σ1³ evaluates to t⁻¹ + t⁻³ − t⁻⁴
    t = np.exp(2j * np.pi / 5)
    v = jones_trace_closure(BraidWord(2, (1, 1, 1))).value
    assert abs(v - (1 / t + t**-3 - t**-4)) < 1e-12
    assert abs(jones_trace_closure(BraidWord(2, (-1, -1, -1))).value - np.conj(v)) < 1e-12


def test_crossing_removal_factor():
    rng = np.random.default_rng(4)
    for _ in range(5):
        b = random_braid(3, 6, rng)
        for sign in (1, -1):
            ext = BraidWord(4, b.letters + (3 * sign,))
            factor = C.delta if sign > 0 else np.conj(C.delta)
            assert abs(weighted_trace(ext).value * factor - weighted_trace(b).value) < 1e-12


def test_tl_markov_reduction():
    # t̃r(x E_{n}) = t̃r(x)/D for x in the first n-1 generators
    # E_3 = A⁻¹σ_3 − A⁻², so the reduction follows from the trace of b·σ_3 and of b
    b = BraidWord(3, (1, -2))
    with_e = weighted_trace(BraidWord(4, b.letters + (3,))).value / C.A
    with_e -= weighted_trace(BraidWord(4, b.letters)).value / C.A**2
    assert abs(with_e - weighted_trace(b).value / C.D) < 1e-12


def test_cyclicity():
    rng = np.random.default_rng(2)
    a, b = random_braid(4, 5, rng), random_braid(4, 5, rng)
    assert abs(weighted_trace(concat(a, b)).value - weighted_trace(concat(b, a)).value) < 1e-9


@pytest.mark.parametrize("seed", range(5))
def test_markov_moves(seed):
    b = random_braid(3, 5, np.random.default_rng(seed))
    assert markov_move_check(b, trials=4, seed=seed).passed
