"""Product bases B_AB = {|e_i^(A)> (x) |e_j^(B)>} on the key part."""
from dataclasses import dataclass

import numpy as np

from bound_key.core.operator import is_unitary
from bound_key.errors import DimensionMismatchError, InvalidStateError

UNITARITY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ProductBasis:
    """Columns of ``alice`` / ``bob`` are the basis vectors."""

    d: int
    alice: np.ndarray
    bob: np.ndarray

    def __post_init__(self):
        alice = np.array(self.alice, dtype=complex)
        bob = np.array(self.bob, dtype=complex)
        for name, u in (("alice", alice), ("bob", bob)):
            if u.shape != (self.d, self.d):
                raise DimensionMismatchError(f"{name} basis has shape {u.shape}, expected {(self.d, self.d)}")
            if not is_unitary(u, UNITARITY_TOL):
                raise InvalidStateError(f"{name} basis matrix is not unitary")
        alice.setflags(write=False)
        bob.setflags(write=False)
        object.__setattr__(self, "alice", alice)
        object.__setattr__(self, "bob", bob)

    @classmethod
    def standard(cls, d: int) -> "ProductBasis":
        return cls(d, np.eye(d), np.eye(d))

    @classmethod
    def conjugate_pair(cls, u: np.ndarray) -> "ProductBasis":
        """Alice measures {U|i>}, Bob {U*|i>}; P_+ stays perfectly correlated."""
        u = np.asarray(u, dtype=complex)
        return cls(u.shape[0], u, u.conj())

    def product_vector(self, i: int, j: int) -> np.ndarray:
        return np.kron(self.alice[:, i], self.bob[:, j])

    def key_unitary(self) -> np.ndarray:
        """Column ``i*d + j`` is |e_i e_j>."""
        return np.kron(self.alice, self.bob)
