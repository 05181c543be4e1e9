"""C-NOT recurrence protocol on rho^(D) copies and the closed-form rho^(D,k) family.

Convention: k copies are consumed by k-1 steps and give rho^(D,k); rho^(D,1) is
rho^(D) itself. Each step keeps both shields, accumulated shield first, then
regroups so that Alice holds (A, A'_1..A'_k) and Bob holds (B, B'_1..B'_k).
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

import numpy as np
from scipy.linalg import polar

from bound_key.core.operator import (
    MultipartiteOperator,
    apply_operator,
    is_unitary,
    partial_trace,
    permute_subsystems,
    tensor,
    tensor_power,
    trace_distance,
    trace_norm,
)
from bound_key.errors import (
    ConstructionError,
    DegeneratePostselectionError,
    DimensionMismatchError,
    MemoryCapExceededError,
)
from bound_key.privacy.basis import ProductBasis
from bound_key.privacy.pdit import PrivateState, make_pdit
from bound_key.states.key_shield import KeyShieldState, make_rho
from bound_key.states.x_family import make_x
from bound_key.utils.config import mem_cap as configured_mem_cap
from observability.logger import get_logger

logger = get_logger("Recurrence")

POSTSELECTION_CUTOFF = 1e-14
POLAR_UNITARITY_TOL = 1e-10

# |s t> -> |s, s xor t>, source qubit first.
CNOT = np.array(
    [[1, 0, 0, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0]],
    dtype=complex,
)
EQUAL_OUTCOMES = np.diag([1.0, 0.0, 0.0, 1.0]).astype(complex)


def decay_ratio(D: int) -> Fraction:
    """t = D^2/(D^2+2D-4) = Tr(|X^{T_B'}|^{T_B'}) / Tr|X|."""
    return Fraction(D * D, D * D + 2 * D - 4)


def normalization_exact(D: int, k: int) -> Fraction:
    """N_{D,k} = 2[1 + t^k]."""
    _check_dk(D, k)
    return 2 * (1 + decay_ratio(D) ** k)


def normalization(D: int, k: int) -> float:
    return float(normalization_exact(D, k))


def success_probability_closed_form(D: int, m: int) -> Fraction:
    """Probability that one step joining rho^(D,m) with a fresh rho^(D) succeeds."""
    return 2 * normalization_exact(D, m + 1) / (normalization_exact(D, 1) * normalization_exact(D, m))


def pbit_distance_closed_form(D: int, k: int) -> Fraction:
    return 1 - 2 / normalization_exact(D, k)


def _check_dk(D: int, k: int) -> None:
    if D < 3:
        raise DimensionMismatchError(f"rho^(D,k) is defined for D >= 3, got D={D}")
    if k < 1:
        raise DimensionMismatchError(f"k must be at least 1, got {k}")


def _check_cap(size: int, cap: Optional[int], what: str) -> None:
    limit = configured_mem_cap() if cap is None else cap
    if size > limit:
        raise MemoryCapExceededError(f"{what} needs dimension {size}, above the cap of {limit}")


def regrouped_power(op: MultipartiteOperator, k: int) -> MultipartiteOperator:
    """op^{(x)k} for a bipartite op, reordered to (A_1..A_k | B_1..B_k) and merged to two factors."""
    if len(op.dims) != 2:
        raise DimensionMismatchError(f"Expected a bipartite operator, got dims {op.dims}")
    power = tensor_power(op, k)
    if k == 1:
        return power
    order = list(range(0, 2 * k, 2)) + list(range(1, 2 * k, 2))
    a, b = op.dims
    return permute_subsystems(power, order).with_dims((a ** k, b ** k))


def rho_k_closed_form(D: int, k: int, mem_cap: Optional[int] = None) -> KeyShieldState:
    _check_dk(D, k)
    _check_cap(4 * D ** (2 * k), mem_cap, f"rho^({D},{k})")
    fam = make_x(D)
    inv_n = 1.0 / normalization(D, k)
    corner = inv_n * regrouped_power(fam.abs_x, k)
    middle = inv_n * regrouped_power(fam.abs_x_pt_pt, k)
    off = inv_n * regrouped_power(fam.x, k)
    return KeyShieldState.from_blocks(2, (D ** k, D ** k), {
        (0, 0, 0, 0): corner,
        (1, 1, 1, 1): corner,
        (0, 1, 0, 1): middle,
        (1, 0, 1, 0): middle,
        (0, 0, 1, 1): off,
        (1, 1, 0, 0): off,
    })


@dataclass(frozen=True, eq=False)
class RecurrenceResult:
    state: KeyShieldState
    success_probability: float
    step_index: int


def recurrence_step(
    accumulated: KeyShieldState,
    fresh: KeyShieldState,
    step_index: int = 1,
    mem_cap: Optional[int] = None,
) -> RecurrenceResult:
    """One round: bilateral C-NOT (fresh key source, accumulated key target),
    keep the fresh copy when the accumulated key qubits read 00 or 11."""
    if accumulated.key_dim != 2 or fresh.key_dim != 2:
        raise DimensionMismatchError(
            f"Recurrence needs 2x2 keys, got d={accumulated.key_dim} and d={fresh.key_dim}"
        )
    _check_cap(accumulated.rho.size * fresh.rho.size, mem_cap, "Recurrence step")
    a, b = accumulated.shield_dims
    fa, fb = fresh.shield_dims

    # [A_acc, B_acc, A'_acc, B'_acc, A_f, B_f, A'_f, B'_f]
    joint = tensor(accumulated.rho, fresh.rho)
    joint = apply_operator(joint, CNOT, [4, 0])
    joint = apply_operator(joint, CNOT, [5, 1])
    joint = apply_operator(joint, EQUAL_OUTCOMES, [0, 1])

    prob = joint.trace().real
    if prob < POSTSELECTION_CUTOFF:
        raise DegeneratePostselectionError(f"Postselection probability {prob:.3e} at step {step_index}")

    kept = partial_trace(joint, [0, 1])
    # [A'_acc, B'_acc, A_f, B_f, A'_f, B'_f] -> [A_f, B_f, A'_acc, A'_f, B'_acc, B'_f]
    kept = permute_subsystems(kept, [2, 3, 0, 4, 1, 5]).with_dims((2, 2, a * fa, b * fb))
    state = KeyShieldState((1.0 / prob) * kept)
    logger.debug("Step %d succeeded with probability %.12g (shield %dx%d)", step_index, prob, a * fa, b * fb)
    return RecurrenceResult(state=state, success_probability=float(prob), step_index=step_index)


def key_block_trace_norm(state: KeyShieldState) -> float:
    if state.key_dim != 2:
        raise DimensionMismatchError(f"Key-block criterion needs a 2x2 key, got d={state.key_dim}")
    return trace_norm(state.block(0, 0, 1, 1))


def limiting_pbit(D: int, k: int, mem_cap: Optional[int] = None) -> PrivateState:
    """Pbit with sigma = |X^{(x)k}| and controls (W, I) where X^{(x)k} = W |X^{(x)k}|."""
    _check_dk(D, k)
    _check_cap(4 * D ** (2 * k), mem_cap, f"Limiting pbit ({D},{k})")
    xk = regrouped_power(make_x(D).x, k)
    w, p = polar(xk.data, side="right")
    if not is_unitary(w, POLAR_UNITARITY_TOL):
        raise ConstructionError(f"Polar factor of X^(x){k} is not unitary; X is rank deficient")
    sigma = MultipartiteOperator(xk.dims, 0.5 * (p + p.conj().T))
    eye = np.eye(sigma.size, dtype=complex)
    return make_pdit(ProductBasis.standard(2), sigma, [w, eye])


@dataclass(frozen=True)
class ProtocolStep:
    step_index: int
    copies: int
    success_probability: float
    expected_success_probability: Fraction
    key_block_trace_norm: float
    closed_form_deviation: float
    pbit_trace_distance: float


@dataclass(frozen=True, eq=False)
class ProtocolTrace:
    D: int
    k: int
    final_state: KeyShieldState
    steps: Tuple[ProtocolStep, ...] = field(default_factory=tuple)

    @property
    def overall_yield(self) -> float:
        return float(np.prod([s.success_probability for s in self.steps])) if self.steps else 1.0

    @property
    def max_closed_form_deviation(self) -> float:
        return max((s.closed_form_deviation for s in self.steps), default=0.0)


def run_protocol(D: int, k: int, mem_cap: Optional[int] = None) -> ProtocolTrace:
    """Fold recurrence_step over k copies of rho^(D), checking each stage against the closed form."""
    _check_dk(D, k)
    fresh = make_rho(D)
    acc = fresh
    steps: List[ProtocolStep] = []
    for i in range(1, k):
        result = recurrence_step(acc, fresh, step_index=i, mem_cap=mem_cap)
        acc = result.state
        copies = i + 1
        expected = rho_k_closed_form(D, copies, mem_cap=mem_cap)
        pbit = limiting_pbit(D, copies, mem_cap=mem_cap)
        steps.append(ProtocolStep(
            step_index=i,
            copies=copies,
            success_probability=result.success_probability,
            expected_success_probability=success_probability_closed_form(D, i),
            key_block_trace_norm=key_block_trace_norm(acc),
            closed_form_deviation=acc.rho.max_abs_diff(expected.rho),
            pbit_trace_distance=trace_distance(acc.rho, pbit.state.rho),
        ))
        logger.info("D=%d step %d: key block norm %.12g", D, i, steps[-1].key_block_trace_norm)
    return ProtocolTrace(D=D, k=k, final_state=acc, steps=tuple(steps))
