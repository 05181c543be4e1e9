"""Canonical purification: |Psi> = sum_m sqrt(lambda_m) |v_m>|m>, eigenvalues descending.

Eigenvalues at or below the cutoff are dropped, so Eve's dimension is the
numerical rank. Any two purifications differ by a unitary on Eve, and every
quantity computed from them downstream (ccq distributions, entropies, security)
is invariant under such unitaries.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from bound_key.core.operator import MultipartiteOperator, hermitian_eig
from bound_key.errors import InvalidStateError
from observability.logger import get_logger

logger = get_logger("Purification")

RANK_CUTOFF = 1e-10
STATE_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Purification:
    """Pure state on ``system_dims + (eve_dim,)``, Eve as the last factor."""

    vector: np.ndarray
    system_dims: Tuple[int, ...]
    eve_dim: int

    @property
    def dims(self) -> Tuple[int, ...]:
        return self.system_dims + (self.eve_dim,)

    def as_operator(self) -> MultipartiteOperator:
        return MultipartiteOperator(self.dims, np.outer(self.vector, self.vector.conj()))

    def system_tensor(self) -> np.ndarray:
        """Amplitudes reshaped to (system, eve)."""
        return self.vector.reshape(-1, self.eve_dim)

    def reduced_system(self) -> MultipartiteOperator:
        psi = self.system_tensor()
        return MultipartiteOperator(self.system_dims, psi @ psi.conj().T)


def purify(rho: MultipartiteOperator, cutoff: float = RANK_CUTOFF) -> Purification:
    spec = hermitian_eig(rho)
    tr = rho.trace().real
    if abs(tr - 1.0) > STATE_TOL:
        raise InvalidStateError(f"Cannot purify: trace is {tr:.15g}, expected 1")
    if spec.min_eigenvalue < -STATE_TOL:
        raise InvalidStateError(f"Cannot purify: negative eigenvalue {spec.min_eigenvalue:.3e}")
    keep = spec.eigenvalues > cutoff
    vals = spec.eigenvalues[keep]
    vecs = spec.eigenvectors[:, keep]
    eve_dim = int(vals.size)
    # row-major (system, eve) flattening puts Eve last
    vector = (vecs * np.sqrt(vals)).reshape(-1)
    logger.debug("Purified %s-dim state with Eve dimension %d", rho.size, eve_dim)
    return Purification(vector=vector, system_dims=rho.dims, eve_dim=eve_dim)
