"""Projector families on C^D (x) C^D: P_+, P, Q, S, the swap V and the diagonal."""
from dataclasses import dataclass

import numpy as np

from bound_key.core.operator import MultipartiteOperator
from bound_key.errors import DimensionMismatchError
from observability.logger import get_logger

logger = get_logger("Projectors")


def maximally_entangled_ket(d: int) -> np.ndarray:
    """(1/sqrt(d)) sum_i |i>|i>."""
    ket = np.zeros(d * d, dtype=complex)
    ket[[i * d + i for i in range(d)]] = 1.0
    return ket / np.sqrt(d)


def maximally_entangled_projector(d: int) -> MultipartiteOperator:
    return MultipartiteOperator.projector(maximally_entangled_ket(d), (d, d))


def swap_operator(d: int) -> MultipartiteOperator:
    """V |a>|b> = |b>|a>."""
    v = np.zeros((d * d, d * d), dtype=complex)
    for a in range(d):
        for b in range(d):
            v[b * d + a, a * d + b] = 1.0
    return MultipartiteOperator((d, d), v)


@dataclass(frozen=True, eq=False)
class ProjectorFamily:
    dimension: int
    p_plus: MultipartiteOperator
    p: MultipartiteOperator
    q: MultipartiteOperator
    s: MultipartiteOperator
    v: MultipartiteOperator
    diagonal: MultipartiteOperator
    identity: MultipartiteOperator

    def members(self):
        return {
            "P_plus": self.p_plus,
            "P": self.p,
            "Q": self.q,
            "S": self.s,
            "V": self.v,
            "diagonal": self.diagonal,
            "identity": self.identity,
        }


def make_projector_family(D: int) -> ProjectorFamily:
    if D < 2:
        raise DimensionMismatchError(f"Projector family needs D >= 2, got {D}")
    dims = (D, D)
    identity = MultipartiteOperator.identity(dims)
    diag = np.zeros(D * D, dtype=complex)
    diag[[i * D + i for i in range(D)]] = 1.0
    diagonal = MultipartiteOperator(dims, np.diag(diag))
    p_plus = maximally_entangled_projector(D)
    v = swap_operator(D)
    family = ProjectorFamily(
        dimension=D,
        p_plus=p_plus,
        p=diagonal - p_plus,
        q=identity - diagonal,
        s=0.5 * (identity + v - 2.0 * diagonal),
        v=v,
        diagonal=diagonal,
        identity=identity,
    )
    logger.debug("Built projector family for D=%d", D)
    return family
