"""Biased pbit mixtures p1 gamma1 + p2 sigma_x^(A) gamma2 sigma_x^(A), and a
diagnostic for whether a two-qubit-key state has that shape."""
from dataclasses import dataclass

import numpy as np

from bound_key.core.operator import MultipartiteOperator, apply_operator, trace_norm
from bound_key.errors import DimensionMismatchError, InvalidStateError
from bound_key.privacy.pdit import PrivateState
from bound_key.states.key_shield import KEY_A, KeyShieldState

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)


def flip_alice_key(state: KeyShieldState) -> KeyShieldState:
    """sigma_x on Alice's key qubit, identity elsewhere."""
    return KeyShieldState(apply_operator(state.rho, PAULI_X, [KEY_A]))


def biased_pbit_mixture(gamma1: PrivateState, gamma2: PrivateState, p1: float) -> KeyShieldState:
    if gamma1.d != 2 or gamma2.d != 2:
        raise DimensionMismatchError("Both private states must be pbits (d = 2)")
    if gamma1.state.rho.dims != gamma2.state.rho.dims:
        raise DimensionMismatchError(
            f"Shield dimensions differ: {gamma1.state.shield_dims} vs {gamma2.state.shield_dims}"
        )
    if not 0.0 <= p1 <= 1.0:
        raise InvalidStateError(f"Mixture weight p1 = {p1} is outside [0, 1]")
    flipped = flip_alice_key(gamma2.state)
    mixed = p1 * gamma1.state.rho + (1.0 - p1) * flipped.rho
    return KeyShieldState(MultipartiteOperator(gamma1.state.rho.dims, mixed.data))


@dataclass(frozen=True)
class MixtureFormReport:
    """Weights of the correlated (00/11) and anticorrelated (01/10) key sectors
    and how close each sector is to a weighted pbit (saturation 1)."""

    correlated_weight: float
    anticorrelated_weight: float
    correlated_saturation: float
    anticorrelated_saturation: float
    leakage_norm: float

    def is_mixture_form(self, tol: float = 1e-9) -> bool:
        sectors = [
            (self.correlated_weight, self.correlated_saturation),
            (self.anticorrelated_weight, self.anticorrelated_saturation),
        ]
        saturated = all(w <= tol or abs(s - 1.0) <= tol for w, s in sectors)
        return saturated and self.leakage_norm <= tol


def _saturation(weight: float, off_norm: float) -> float:
    return 2.0 * off_norm / weight if weight > 0 else 0.0


def mixture_form_report(state: KeyShieldState) -> MixtureFormReport:
    """Diagnostic only: blocks coupling the two sectors count as leakage."""
    if state.key_dim != 2:
        raise DimensionMismatchError(f"Mixture diagnostic needs a 2x2 key, got d={state.key_dim}")
    correlated = [(0, 0), (1, 1)]
    anticorrelated = [(0, 1), (1, 0)]
    w_corr = sum(state.block(i, j, i, j).trace().real for i, j in correlated)
    w_anti = sum(state.block(i, j, i, j).trace().real for i, j in anticorrelated)
    leakage = max(
        trace_norm(state.block(a[0], a[1], b[0], b[1]))
        for a in correlated
        for b in anticorrelated
    )
    return MixtureFormReport(
        correlated_weight=w_corr,
        anticorrelated_weight=w_anti,
        correlated_saturation=_saturation(w_corr, trace_norm(state.block(0, 0, 1, 1))),
        anticorrelated_saturation=_saturation(w_anti, trace_norm(state.block(0, 1, 1, 0))),
        leakage_norm=leakage,
    )
