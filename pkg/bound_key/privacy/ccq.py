"""ccq states: measure the key part of a purified state in a product basis."""
from dataclasses import dataclass
from itertools import combinations
from typing import List, Optional, Tuple

import numpy as np

from bound_key.core.operator import MultipartiteOperator, trace_distance
from bound_key.errors import DimensionMismatchError
from bound_key.privacy.basis import ProductBasis
from bound_key.privacy.purification import Purification, purify
from bound_key.states.key_shield import KeyShieldState
from observability.logger import get_logger

logger = get_logger("Ccq")

# Outcomes below this probability get no conditional Eve state.
OUTCOME_CUTOFF = 1e-14
SECURITY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class CcqState:
    d: int
    p: np.ndarray
    eve_states: Tuple[Tuple[Optional[np.ndarray], ...], ...]
    eve_dim: int

    def outcomes(self, tol: float = OUTCOME_CUTOFF) -> List[Tuple[int, int]]:
        return [
            (i, j)
            for i in range(self.d)
            for j in range(self.d)
            if self.p[i, j] > tol and self.eve_states[i][j] is not None
        ]

    def eve_operator(self, i: int, j: int) -> MultipartiteOperator:
        return MultipartiteOperator((self.eve_dim,), self.eve_states[i][j])

    def eve_marginal(self) -> np.ndarray:
        rho_e = np.zeros((self.eve_dim, self.eve_dim), dtype=complex)
        for i, j in self.outcomes():
            rho_e += self.p[i, j] * self.eve_states[i][j]
        return rho_e

    def max_pairwise_distance(self, tol: float = OUTCOME_CUTOFF) -> float:
        outcomes = self.outcomes(tol)
        worst = 0.0
        for a, b in combinations(outcomes, 2):
            dist = trace_distance(self.eve_operator(*a), self.eve_operator(*b))
            worst = max(worst, dist)
        return worst

    def pairwise_distances(self) -> np.ndarray:
        """Matrix of Eve-state trace distances over ``outcomes()`` (unitary invariant)."""
        outcomes = self.outcomes()
        dist = np.zeros((len(outcomes), len(outcomes)))
        for x, y in combinations(range(len(outcomes)), 2):
            dist[x, y] = dist[y, x] = trace_distance(
                self.eve_operator(*outcomes[x]), self.eve_operator(*outcomes[y])
            )
        return dist


def ccq(
    state: KeyShieldState,
    basis: ProductBasis,
    purification: Optional[Purification] = None,
) -> CcqState:
    """ccq state of ``state`` w.r.t. ``basis``.

    Eve holds the canonical purification unless one is passed explicitly (it
    must purify ``state`` with Eve as the last factor).
    """
    d = state.key_dim
    if basis.d != d:
        raise DimensionMismatchError(f"Basis dimension {basis.d} does not match key dimension {d}")
    if purification is None:
        purification = purify(state.rho)
    elif purification.system_dims != state.rho.dims:
        raise DimensionMismatchError(
            f"Purification dims {purification.system_dims} do not match state dims {state.rho.dims}"
        )

    eve_dim = purification.eve_dim
    psi = purification.vector.reshape(d, d, state.shield_size, eve_dim)
    # <e_i e_j| on the key part
    phi = np.einsum("ai,bj,abse->ijse", basis.alice.conj(), basis.bob.conj(), psi)

    p = np.zeros((d, d))
    eve_rows = []
    for i in range(d):
        row = []
        for j in range(d):
            amp = phi[i, j]
            unnormalised = amp.T @ amp.conj()
            weight = float(np.real(np.trace(unnormalised)))
            p[i, j] = max(weight, 0.0)
            row.append(unnormalised / weight if weight > OUTCOME_CUTOFF else None)
        eve_rows.append(tuple(row))
    p.setflags(write=False)
    logger.debug("ccq over %dx%d outcomes, Eve dimension %d", d, d, eve_dim)
    return CcqState(d=d, p=p, eve_states=tuple(eve_rows), eve_dim=eve_dim)


def is_secure(c: CcqState, tol: float = SECURITY_TOL) -> bool:
    """All conditional Eve states (over outcomes with p > tol) agree within tol."""
    return c.max_pairwise_distance(tol) <= tol


def has_key(c: CcqState, tol: float = SECURITY_TOL) -> bool:
    """Secure, and p is uniform on the correlated outcomes (p_ii = 1/d)."""
    uniform = np.eye(c.d) / c.d
    return bool(np.max(np.abs(c.p - uniform)) <= tol) and is_secure(c, tol)
