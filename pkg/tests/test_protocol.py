# tests/test_protocol.py
"""Recurrence protocol, the rho^(D,k) family and the key-block criterion."""
from fractions import Fraction

import numpy as np
import pandas as pd
import pytest
from numpy.testing import assert_allclose

from bound_key.core.operator import MultipartiteOperator, trace_norm
from bound_key.errors import (
    DegeneratePostselectionError,
    DimensionMismatchError,
    MemoryCapExceededError,
)
from bound_key.privacy.basis import ProductBasis
from bound_key.privacy.ccq import ccq
from bound_key.privacy.pdit import basic_pdit, random_pbit
from bound_key.protocol.criterion import CSV_COLUMNS, criterion_series
from bound_key.protocol.recurrence import (
    decay_ratio,
    key_block_trace_norm,
    limiting_pbit,
    normalization,
    normalization_exact,
    pbit_distance_closed_form,
    recurrence_step,
    regrouped_power,
    rho_k_closed_form,
    run_protocol,
    success_probability_closed_form,
)
from bound_key.states.key_shield import KeyShieldState, check_ppt, make_rho

SMALL_CAP = 400


def _key_only(ket):
    """Pure two-qubit key state with a trivial shield."""
    return KeyShieldState(MultipartiteOperator.projector(np.asarray(ket, dtype=complex), (2, 2, 1, 1)))


def test_exact_quantities_at_d3():
    assert decay_ratio(3) == Fraction(9, 11)
    assert decay_ratio(6) == Fraction(9, 11)
    assert normalization_exact(3, 1) == Fraction(40, 11)
    assert normalization_exact(3, 2) == Fraction(404, 121)
    assert success_probability_closed_form(3, 1) == Fraction(101, 200)
    assert pbit_distance_closed_form(3, 1) == Fraction(9, 20)


def test_rho_k_at_one_is_rho():
    for D in (3, 4):
        assert rho_k_closed_form(D, 1).rho.max_abs_diff(make_rho(D).rho) <= 1e-15


def test_rho_k_dims_and_validity():
    state = rho_k_closed_form(3, 2, mem_cap=SMALL_CAP)
    assert state.rho.dims == (2, 2, 9, 9)
    state.validate()
    assert check_ppt(state).is_ppt


def test_regrouped_power_orders_factors():
    rng = np.random.default_rng(3)
    a = rng.standard_normal((2, 2))
    b = rng.standard_normal((3, 3))
    op = MultipartiteOperator((2, 3), np.kron(a, b))
    regrouped = regrouped_power(op, 2)
    assert regrouped.dims == (4, 9)
    assert_allclose(regrouped.data, np.kron(np.kron(a, a), np.kron(b, b)), atol=1e-12)
    with pytest.raises(DimensionMismatchError):
        regrouped_power(MultipartiteOperator.identity((2, 2, 2)), 2)


def test_one_step_matches_closed_form():
    rho = make_rho(3)
    result = recurrence_step(rho, rho, mem_cap=4096)
    assert result.success_probability == pytest.approx(0.505, abs=1e-12)
    expected = rho_k_closed_form(3, 2, mem_cap=4096)
    assert result.state.rho.dims == expected.rho.dims
    assert result.state.rho.max_abs_diff(expected.rho) <= 1e-10
    assert result.state.rho.trace().real == pytest.approx(1.0, abs=1e-12)


def test_output_of_step_stays_ppt():
    rho = make_rho(3)
    out = recurrence_step(rho, rho, mem_cap=4096).state
    assert check_ppt(out).is_ppt


def test_basic_pbit_is_a_fixed_point():
    gamma = random_pbit(np.random.default_rng(61), shield_dims=(2, 1))
    basis = ProductBasis.standard(2)
    basic = basic_pdit(basis, gamma.sigma)
    result = recurrence_step(basic, basic, mem_cap=4096)
    assert result.success_probability == pytest.approx(1.0, abs=1e-12)
    expected = basic_pdit(basis, regrouped_power(gamma.sigma, 2))
    assert result.state.rho.max_abs_diff(expected.rho) <= 1e-12


def test_degenerate_postselection():
    acc = _key_only([0, 1, 0, 0])  # |01>: the target pair never reads equal
    fresh = _key_only([1, 0, 0, 0])
    with pytest.raises(DegeneratePostselectionError):
        recurrence_step(acc, fresh)


def test_step_rejects_larger_keys():
    with pytest.raises(DimensionMismatchError):
        recurrence_step(make_rho(3), KeyShieldState(MultipartiteOperator.identity((3, 3, 1, 1)) * (1 / 9)))


def test_memory_cap():
    with pytest.raises(MemoryCapExceededError):
        rho_k_closed_form(3, 3, mem_cap=SMALL_CAP)
    with pytest.raises(MemoryCapExceededError):
        recurrence_step(make_rho(3), make_rho(3), mem_cap=1000)
    with pytest.raises(MemoryCapExceededError):
        limiting_pbit(3, 3, mem_cap=SMALL_CAP)


def test_memory_cap_from_environment(monkeypatch):
    monkeypatch.setenv("BOUNDKEY_MEM_CAP", "100")
    with pytest.raises(MemoryCapExceededError):
        rho_k_closed_form(3, 2)
    monkeypatch.delenv("BOUNDKEY_MEM_CAP")
    assert rho_k_closed_form(3, 2).rho.size == 324


def test_key_block_norm():
    assert key_block_trace_norm(make_rho(3)) == pytest.approx(0.275, abs=1e-12)
    assert key_block_trace_norm(rho_k_closed_form(3, 2)) == pytest.approx(121 / 404, abs=1e-12)
    assert 1 / normalization(3, 10) == pytest.approx(0.44075, abs=1e-4)


def test_limiting_pbit():
    for k in (1, 2):
        pbit = limiting_pbit(3, k, mem_cap=SMALL_CAP)
        assert key_block_trace_norm(pbit.state) == pytest.approx(0.5, abs=1e-10)
        # sigma = |X^(x)k| has unit trace
        assert pbit.sigma.trace().real == pytest.approx(1.0, abs=1e-10)
        assert trace_norm(pbit.sigma) == pytest.approx(1.0, abs=1e-10)


def test_criterion_series_closed_form():
    series = criterion_series(3, 23, mem_cap=SMALL_CAP)
    assert [e.k for e in series.entries] == list(range(1, 24))
    for e in series.entries:
        assert e.key_block_trace_norm == pytest.approx(1 / normalization(3, e.k), abs=1e-12)
        assert e.gap_to_half == pytest.approx(0.5 - e.key_block_trace_norm, abs=1e-15)
    norms = [e.key_block_trace_norm for e in series.entries]
    assert all(b > a for a, b in zip(norms, norms[1:]))
    assert all(n < 0.5 for n in norms)
    assert series.entry(23).gap_to_half < 0.01
    assert series.entry(1).key_block_trace_norm == pytest.approx(0.275, abs=1e-12)


def test_criterion_dense_cross_check():
    series = criterion_series(3, 5, mem_cap=SMALL_CAP)
    assert [e.dense_checked for e in series.entries] == [True, True, False, False, False]
    assert series.dense_agrees(1e-10)
    for k in (1, 2):
        e = series.entry(k)
        assert e.pbit_trace_distance == pytest.approx(float(pbit_distance_closed_form(3, k)), abs=1e-9)
    assert series.entry(2).pbit_trace_distance < series.entry(1).pbit_trace_distance
    assert series.entry(3).pbit_trace_distance is None
    with pytest.raises(KeyError):
        series.entry(6)


def test_dense_series_up_to_three_copies():
    series = criterion_series(3, 3, mem_cap=4096)
    assert all(e.dense_checked for e in series.entries)
    assert series.dense_agrees(1e-9)
    distances = [e.pbit_trace_distance for e in series.entries]
    assert distances[0] > distances[1] > distances[2]
    assert distances[2] == pytest.approx(float(pbit_distance_closed_form(3, 3)), abs=1e-9)


def test_criterion_frame():
    frame = criterion_series(3, 4, mem_cap=SMALL_CAP).to_frame()
    assert list(frame.columns) == CSV_COLUMNS
    assert len(frame) == 4
    assert frame["k"].tolist() == [1, 2, 3, 4]
    assert frame["pbit_trace_distance"].isna().tolist() == [False, False, True, True]


def test_criterion_thread_pool_keeps_order():
    sequential = criterion_series(3, 6, mem_cap=SMALL_CAP).to_frame()
    pooled = criterion_series(3, 6, mem_cap=SMALL_CAP, max_workers=3).to_frame()
    pd.testing.assert_frame_equal(sequential, pooled)


def test_criterion_rejects_bad_arguments():
    with pytest.raises(DimensionMismatchError):
        criterion_series(2, 5)
    with pytest.raises(DimensionMismatchError):
        criterion_series(3, 0)


@pytest.mark.parametrize("D", [3, 4, 5, 6])
def test_decay_ratio_below_one(D):
    t = decay_ratio(D)
    assert 0 < t < 1
    assert normalization(D, 40) == pytest.approx(2.0, abs=1e-2)


def test_ccq_distribution_of_rho_k():
    state = rho_k_closed_form(3, 2, mem_cap=SMALL_CAP)
    c = ccq(state, ProductBasis.standard(2))
    n = normalization(3, 2)
    t = float(decay_ratio(3))
    assert_allclose(np.diag(c.p), [1 / n, 1 / n], atol=1e-10)
    assert c.p[0, 1] == pytest.approx(t ** 2 / n, abs=1e-10)
    assert c.p.sum() == pytest.approx(1.0, abs=1e-10)


def test_eve_learns_less_as_copies_grow():
    t = float(decay_ratio(3))
    anticorrelated = []
    for k in (1, 2):
        c = ccq(rho_k_closed_form(3, k, mem_cap=SMALL_CAP), ProductBasis.standard(2))
        assert c.outcomes() == [(0, 0), (0, 1), (1, 0), (1, 1)]
        dist = c.pairwise_distances()
        # Eve cannot tell 00 from 11
        assert dist[0, 3] == pytest.approx(0.0, abs=1e-9)
        # but she always separates correlated from anticorrelated outcomes
        assert c.max_pairwise_distance() == pytest.approx(1.0, abs=1e-9)
        weight = c.p[0, 1] + c.p[1, 0]
        assert weight == pytest.approx(2 * t ** k / normalization(3, k), abs=1e-10)
        anticorrelated.append(weight)
    assert anticorrelated[1] < anticorrelated[0]


def test_run_protocol_single_copy():
    trace = run_protocol(3, 1)
    assert trace.steps == ()
    assert trace.overall_yield == 1.0
    assert trace.final_state.rho.max_abs_diff(make_rho(3).rho) == 0.0


def test_run_protocol_two_copies():
    trace = run_protocol(3, 2, mem_cap=4096)
    (step,) = trace.steps
    assert step.copies == 2
    assert step.expected_success_probability == Fraction(101, 200)
    assert step.success_probability == pytest.approx(0.505, abs=1e-12)
    assert step.closed_form_deviation <= 1e-10
    assert step.key_block_trace_norm == pytest.approx(121 / 404, abs=1e-10)
    assert step.pbit_trace_distance == pytest.approx(float(pbit_distance_closed_form(3, 2)), abs=1e-9)
    assert trace.overall_yield == pytest.approx(0.505, abs=1e-12)
    assert trace.max_closed_form_deviation <= 1e-10


def test_run_protocol_respects_cap():
    with pytest.raises(MemoryCapExceededError):
        run_protocol(3, 3, mem_cap=4096)
