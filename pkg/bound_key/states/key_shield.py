"""States on key (d x d) and shield (d_A' x d_B') parts, subsystem order [A, B, A', B'].

The key basis index of |i j> is ``i*d + j``, so for d = 2 the block A_{ij,kl}
is the shield-sized block at block-row 2i+j, block-column 2k+l, and A_{00,11}
is the top-right block.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Tuple

import numpy as np

from bound_key.core.operator import (
    HERMITIAN_TOL,
    PSD_TOL,
    MultipartiteOperator,
    min_eigenvalue,
    partial_trace,
    partial_transpose,
    trace_norm,
)
from bound_key.errors import DimensionMismatchError, InvalidStateError
from bound_key.states.x_family import make_x
from observability.logger import get_logger

logger = get_logger("KeyShieldState")

KEY_A, KEY_B, SHIELD_A, SHIELD_B = 0, 1, 2, 3
BOB_SUBSYSTEMS = (KEY_B, SHIELD_B)

BlockIndex = Tuple[int, int, int, int]


@dataclass(frozen=True, eq=False)
class KeyShieldState:
    rho: MultipartiteOperator

    def __post_init__(self):
        dims = self.rho.dims
        if len(dims) != 4 or dims[0] != dims[1]:
            raise DimensionMismatchError(f"Expected dims [d, d, dA', dB'], got {dims}")

    @property
    def key_dim(self) -> int:
        return self.rho.dims[KEY_A]

    @property
    def shield_dims(self) -> Tuple[int, int]:
        return self.rho.dims[SHIELD_A], self.rho.dims[SHIELD_B]

    @property
    def shield_size(self) -> int:
        return self.rho.dims[SHIELD_A] * self.rho.dims[SHIELD_B]

    def block(self, i: int, j: int, k: int, l: int) -> MultipartiteOperator:
        d, s = self.key_dim, self.shield_size
        for idx in (i, j, k, l):
            if not 0 <= idx < d:
                raise DimensionMismatchError(f"Key index {idx} out of range for d={d}")
        r, c = i * d + j, k * d + l
        return MultipartiteOperator(self.shield_dims, self.rho.data[r * s:(r + 1) * s, c * s:(c + 1) * s])

    def key_marginal(self) -> MultipartiteOperator:
        return partial_trace(self.rho, [SHIELD_A, SHIELD_B])

    def validate(self, tol: float = PSD_TOL, herm_tol: float = HERMITIAN_TOL) -> "KeyShieldState":
        """Raise InvalidStateError unless Hermitian, unit trace and PSD."""
        if not self.rho.is_hermitian(herm_tol):
            raise InvalidStateError(f"State is not Hermitian (error {self.rho.hermiticity_error():.3e})")
        tr = self.rho.trace()
        if abs(tr - 1.0) > tol:
            raise InvalidStateError(f"State trace is {tr.real:.15g}, expected 1")
        lam = min_eigenvalue(self.rho)
        if lam < -tol:
            raise InvalidStateError(f"State has negative eigenvalue {lam:.3e}")
        return self

    @classmethod
    def from_blocks(
        cls,
        key_dim: int,
        shield_dims: Tuple[int, int],
        blocks: Mapping[BlockIndex, MultipartiteOperator],
    ) -> "KeyShieldState":
        """Assemble sum |ij><kl| (x) A_{ij,kl}; absent blocks are zero."""
        d = key_dim
        s = shield_dims[0] * shield_dims[1]
        data = np.zeros((d * d * s, d * d * s), dtype=complex)
        for (i, j, k, l), blk in blocks.items():
            arr = blk.data if isinstance(blk, MultipartiteOperator) else np.asarray(blk)
            if arr.shape != (s, s):
                raise DimensionMismatchError(f"Block {(i, j, k, l)} has shape {arr.shape}, expected {(s, s)}")
            r, c = i * d + j, k * d + l
            data[r * s:(r + 1) * s, c * s:(c + 1) * s] = arr
        return cls(MultipartiteOperator((d, d) + tuple(shield_dims), data))


@dataclass(frozen=True)
class PptReport:
    min_eigenvalue: float
    is_ppt: bool
    pt_trace_norm: float
    negativity: float


def rho_prefactor(D: int) -> Fraction:
    """(1/4)(D^2+2D-4)/(D^2+D-2); 11/40 at D = 3."""
    return Fraction(D * D + 2 * D - 4, 4 * (D * D + D - 2))


def make_rho(D: int) -> KeyShieldState:
    fam = make_x(D)
    c = float(rho_prefactor(D))
    corner, middle, off = c * fam.abs_x, c * fam.abs_x_pt_pt, c * fam.x
    state = KeyShieldState.from_blocks(2, (D, D), {
        (0, 0, 0, 0): corner,
        (1, 1, 1, 1): corner,
        (0, 1, 0, 1): middle,
        (1, 0, 1, 0): middle,
        (0, 0, 1, 1): off,
        (1, 1, 0, 0): off,
    })
    logger.debug("Built rho^(%d) with prefactor %s", D, rho_prefactor(D))
    return state


def make_rho_pt_closed_form(D: int) -> MultipartiteOperator:
    """rho^(D) transposed on BB', assembled directly from the transposed X blocks."""
    fam = make_x(D)
    c = float(rho_prefactor(D))
    corner, middle, off = c * fam.pt_abs_x, c * fam.abs_x_pt, c * fam.x_pt
    return KeyShieldState.from_blocks(2, (D, D), {
        (0, 0, 0, 0): corner,
        (1, 1, 1, 1): corner,
        (0, 1, 0, 1): middle,
        (1, 0, 1, 0): middle,
        (0, 1, 1, 0): off,
        (1, 0, 0, 1): off,
    }).rho


def check_ppt(state: KeyShieldState, tol: Optional[float] = None) -> PptReport:
    """Partial transpose over Bob's subsystems {B, B'} and test positivity."""
    tol = PSD_TOL if tol is None else tol
    pt = partial_transpose(state.rho, BOB_SUBSYSTEMS)
    lam = min_eigenvalue(pt)
    norm = trace_norm(pt)
    report = PptReport(
        min_eigenvalue=lam,
        is_ppt=lam >= -tol,
        pt_trace_norm=norm,
        negativity=max(0.0, (norm - 1.0) / 2.0),
    )
    logger.debug("PPT check: min eigenvalue %.3e (ppt=%s)", lam, report.is_ppt)
    return report


def embed_key_state(key_op: MultipartiteOperator) -> KeyShieldState:
    """Put a d x d key state next to a trivial 1 x 1 shield."""
    if len(key_op.dims) != 2:
        raise DimensionMismatchError(f"Expected a bipartite key operator, got dims {key_op.dims}")
    return KeyShieldState(key_op.with_dims(tuple(key_op.dims) + (1, 1)))
