"""B_AB-twistings U = sum_ij |e_i e_j><e_i e_j| (x) U_ij acting on the shield."""
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from bound_key.core.operator import MultipartiteOperator, is_unitary
from bound_key.errors import DimensionMismatchError, InvalidStateError
from bound_key.privacy.basis import UNITARITY_TOL, ProductBasis
from bound_key.privacy.purification import Purification
from bound_key.privacy.sampling import random_unitary
from bound_key.states.key_shield import KeyShieldState


@dataclass(frozen=True, eq=False)
class Twisting:
    d: int
    controls: Tuple[Tuple[np.ndarray, ...], ...]

    def __post_init__(self):
        if len(self.controls) != self.d or any(len(row) != self.d for row in self.controls):
            raise DimensionMismatchError(f"Twisting needs a {self.d}x{self.d} grid of controls")
        sizes = {np.asarray(u).shape for row in self.controls for u in row}
        if len(sizes) != 1:
            raise DimensionMismatchError(f"Controls have mixed shapes: {sorted(sizes)}")
        rows = []
        for i, row in enumerate(self.controls):
            frozen = []
            for j, u in enumerate(row):
                u = np.array(u, dtype=complex)
                if not is_unitary(u, UNITARITY_TOL):
                    raise InvalidStateError(f"Control U_{i}{j} is not unitary")
                u.setflags(write=False)
                frozen.append(u)
            rows.append(tuple(frozen))
        object.__setattr__(self, "controls", tuple(rows))

    @property
    def shield_size(self) -> int:
        return self.controls[0][0].shape[0]

    @classmethod
    def identity(cls, d: int, shield_size: int) -> "Twisting":
        eye = np.eye(shield_size)
        return cls(d, tuple(tuple(eye for _ in range(d)) for _ in range(d)))

    @classmethod
    def diagonal(cls, controls: Sequence[np.ndarray], off_diagonal: Optional[np.ndarray] = None) -> "Twisting":
        """U_ii = controls[i]; U_ij (i != j) = off_diagonal, identity by default."""
        d = len(controls)
        size = np.asarray(controls[0]).shape[0]
        off = np.eye(size) if off_diagonal is None else off_diagonal
        return cls(d, tuple(tuple(controls[i] if i == j else off for j in range(d)) for i in range(d)))

    @classmethod
    def random(cls, d: int, shield_size: int, rng: np.random.Generator) -> "Twisting":
        return cls(d, tuple(tuple(random_unitary(shield_size, rng) for _ in range(d)) for _ in range(d)))

    def inverse(self) -> "Twisting":
        return Twisting(self.d, tuple(tuple(u.conj().T for u in row) for row in self.controls))

    def operator(self, basis: ProductBasis) -> np.ndarray:
        if basis.d != self.d:
            raise DimensionMismatchError(f"Basis dimension {basis.d} does not match twisting dimension {self.d}")
        s = self.shield_size
        total = np.zeros((self.d * self.d * s, self.d * self.d * s), dtype=complex)
        for i in range(self.d):
            for j in range(self.d):
                v = basis.product_vector(i, j)
                total += np.kron(np.outer(v, v.conj()), self.controls[i][j])
        return total


def _check_compatible(state_dims: Tuple[int, ...], t: Twisting) -> None:
    d = state_dims[0]
    shield = state_dims[2] * state_dims[3]
    if t.d != d or t.shield_size != shield:
        raise DimensionMismatchError(
            f"Twisting (d={t.d}, shield {t.shield_size}) does not fit state dims {state_dims}"
        )


def apply_twisting(state: KeyShieldState, t: Twisting, basis: ProductBasis) -> KeyShieldState:
    _check_compatible(state.rho.dims, t)
    u = t.operator(basis)
    return KeyShieldState(MultipartiteOperator(state.rho.dims, u @ state.rho.data @ u.conj().T))


def twist_purification(purification: Purification, t: Twisting, basis: ProductBasis) -> Purification:
    """(U (x) I_E)|Psi>: a purification of the twisted state."""
    _check_compatible(purification.system_dims, t)
    u = t.operator(basis)
    vector = (u @ purification.system_tensor()).reshape(-1)
    return Purification(vector=vector, system_dims=purification.system_dims, eve_dim=purification.eve_dim)
