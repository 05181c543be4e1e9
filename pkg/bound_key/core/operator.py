"""Dense complex operators over multipartite Hilbert spaces.

Subsystem ordering convention: the leftmost subsystem in ``dims`` is the most
significant digit of the row/column index, i.e. ``tensor(a, b)`` is
``np.kron(a, b)``.

Norm conventions:
- ``trace_norm`` is the raw sum of singular values, ``Tr sqrt(M^dagger M)``.
- ``trace_distance`` carries the conventional factor 1/2.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import prod
from typing import Iterable, Sequence, Tuple

import numpy as np

from bound_key.errors import (
    DimensionMismatchError,
    NotHermitianError,
    SubsystemIndexError,
)
from observability.logger import get_logger

logger = get_logger("MatrixCore")

# Absolute, entrywise.
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class MultipartiteOperator:
    """Square complex matrix tagged with its subsystem dimensions.

    The wrapped array is made read-only so instances can be shared freely.
    """

    dims: Tuple[int, ...]
    data: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise DimensionMismatchError(f"Invalid subsystem dimensions: {self.dims}")
        data = np.asarray(self.data, dtype=complex)
        if data.flags.writeable:
            data = data.copy()
            data.setflags(write=False)
        n = prod(dims)
        if data.shape != (n, n):
            raise DimensionMismatchError(
                f"Matrix shape {data.shape} does not match dims {dims} (expected {n}x{n})"
            )
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "data", data)

    @classmethod
    def identity(cls, dims: Sequence[int]) -> "MultipartiteOperator":
        return cls(tuple(dims), np.eye(prod(dims), dtype=complex))

    @classmethod
    def projector(cls, ket: np.ndarray, dims: Sequence[int]) -> "MultipartiteOperator":
        """|ket><ket| (the ket is normalised first)."""
        vec = np.asarray(ket, dtype=complex).reshape(-1)
        norm = np.linalg.norm(vec)
        if norm == 0:
            raise DimensionMismatchError("Cannot build a projector from the zero vector")
        vec = vec / norm
        return cls(tuple(dims), np.outer(vec, vec.conj()))

    @property
    def size(self) -> int:
        return self.data.shape[0]

    @property
    def num_subsystems(self) -> int:
        return len(self.dims)

    def dagger(self) -> "MultipartiteOperator":
        return MultipartiteOperator(self.dims, self.data.conj().T)

    def trace(self) -> complex:
        return complex(np.trace(self.data))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.data - self.data.conj().T))) if self.size else 0.0

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        return self.hermiticity_error() <= tol

    def with_dims(self, dims: Sequence[int]) -> "MultipartiteOperator":
        """Relabel the factorisation (e.g. merge adjacent subsystems)."""
        return MultipartiteOperator(tuple(dims), self.data)

    def max_abs_diff(self, other: "MultipartiteOperator") -> float:
        _require_same_dims(self, other)
        return float(np.max(np.abs(self.data - other.data)))

    def allclose(self, other: "MultipartiteOperator", atol: float = 1e-12) -> bool:
        return self.dims == other.dims and self.max_abs_diff(other) <= atol

    def __add__(self, other: "MultipartiteOperator") -> "MultipartiteOperator":
        _require_same_dims(self, other)
        return MultipartiteOperator(self.dims, self.data + other.data)

    def __sub__(self, other: "MultipartiteOperator") -> "MultipartiteOperator":
        _require_same_dims(self, other)
        return MultipartiteOperator(self.dims, self.data - other.data)

    def __matmul__(self, other: "MultipartiteOperator") -> "MultipartiteOperator":
        _require_same_dims(self, other)
        return MultipartiteOperator(self.dims, self.data @ other.data)

    def __mul__(self, scalar) -> "MultipartiteOperator":
        return MultipartiteOperator(self.dims, self.data * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "MultipartiteOperator":
        return MultipartiteOperator(self.dims, -self.data)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues in descending order and the matching eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.eigenvectors * self.eigenvalues) @ self.eigenvectors.conj().T

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])


def _require_same_dims(a: MultipartiteOperator, b: MultipartiteOperator) -> None:
    if a.dims != b.dims:
        raise DimensionMismatchError(f"Dimension mismatch: {a.dims} vs {b.dims}")


def _require_hermitian(m: MultipartiteOperator, tol: float = HERMITIAN_TOL) -> None:
    err = m.hermiticity_error()
    if err > tol:
        raise NotHermitianError(f"Matrix is not Hermitian (max |M - M^dagger| = {err:.3e})")


def _subsystem_indices(dims: Sequence[int], subsystems: Iterable[int], ordered: bool = False) -> Tuple[int, ...]:
    idx = tuple(int(s) for s in subsystems)
    n = len(dims)
    for s in idx:
        if s < 0 or s >= n:
            raise SubsystemIndexError(f"Subsystem index {s} out of range for {n} subsystems")
    if len(set(idx)) != len(idx):
        raise SubsystemIndexError(f"Repeated subsystem index in {idx}")
    return idx if ordered else tuple(sorted(idx))


def tensor(a: MultipartiteOperator, b: MultipartiteOperator) -> MultipartiteOperator:
    return MultipartiteOperator(a.dims + b.dims, np.kron(a.data, b.data))


def tensor_all(ops: Sequence[MultipartiteOperator]) -> MultipartiteOperator:
    if not ops:
        raise DimensionMismatchError("tensor_all needs at least one operator")
    return reduce(tensor, ops)


def tensor_power(op: MultipartiteOperator, k: int) -> MultipartiteOperator:
    if k < 1:
        raise DimensionMismatchError(f"Tensor power needs k >= 1, got {k}")
    return tensor_all([op] * k)


def partial_transpose(m: MultipartiteOperator, subsystems: Iterable[int]) -> MultipartiteOperator:
    """Transpose the row/column indices of the selected subsystems.

    A pure index permutation, so applying it twice gives back ``m`` exactly.
    """
    idx = _subsystem_indices(m.dims, subsystems)
    n = m.num_subsystems
    axes = list(range(2 * n))
    for s in idx:
        axes[s], axes[n + s] = axes[n + s], axes[s]
    t = m.data.reshape(m.dims + m.dims).transpose(axes)
    return MultipartiteOperator(m.dims, t.reshape(m.size, m.size))


def partial_trace(m: MultipartiteOperator, subsystems: Iterable[int]) -> MultipartiteOperator:
    """Trace out the selected subsystems; the remaining ones keep their order."""
    idx = _subsystem_indices(m.dims, subsystems)
    if len(idx) == m.num_subsystems:
        raise SubsystemIndexError("Cannot trace out every subsystem; use trace() instead")
    t = m.data.reshape(m.dims + m.dims)
    n_cur = m.num_subsystems
    for s in reversed(idx):
        t = np.trace(t, axis1=s, axis2=s + n_cur)
        n_cur -= 1
    kept = tuple(d for i, d in enumerate(m.dims) if i not in idx)
    size = prod(kept)
    return MultipartiteOperator(kept, t.reshape(size, size))


def permute_subsystems(m: MultipartiteOperator, order: Sequence[int]) -> MultipartiteOperator:
    """Reorder subsystems: position i of the result holds subsystem ``order[i]``."""
    order = _subsystem_indices(m.dims, order, ordered=True)
    if len(order) != m.num_subsystems:
        raise SubsystemIndexError(f"Permutation {order} does not cover {m.num_subsystems} subsystems")
    n = m.num_subsystems
    t = m.data.reshape(m.dims + m.dims).transpose(list(order) + [n + o for o in order])
    return MultipartiteOperator(tuple(m.dims[o] for o in order), t.reshape(m.size, m.size))


def _contract_front(t: np.ndarray, k: np.ndarray, axes: Sequence[int]) -> np.ndarray:
    front = list(range(len(axes)))
    moved = np.moveaxis(t, list(axes), front)
    shape = moved.shape
    out = (k @ moved.reshape(k.shape[1], -1)).reshape(shape)
    return np.moveaxis(out, front, list(axes))


def apply_operator(m: MultipartiteOperator, k: np.ndarray, subsystems: Sequence[int]) -> MultipartiteOperator:
    """Return ``K m K^dagger`` with K acting on ``subsystems`` (in the given order).

    K is a square matrix on the tensor product of the listed subsystems; the
    listed order fixes which factor of K maps to which subsystem.
    """
    idx = _subsystem_indices(m.dims, subsystems, ordered=True)
    k = np.asarray(k, dtype=complex)
    sub = prod(m.dims[s] for s in idx)
    if k.shape != (sub, sub):
        raise DimensionMismatchError(f"Operator shape {k.shape} does not act on subsystems {idx} ({sub})")
    n = m.num_subsystems
    t = m.data.reshape(m.dims + m.dims)
    t = _contract_front(t, k, idx)
    t = _contract_front(t, k.conj(), [n + s for s in idx])
    return MultipartiteOperator(m.dims, t.reshape(m.size, m.size))


def hermitian_eig(m: MultipartiteOperator) -> Spectrum:
    _require_hermitian(m)
    vals, vecs = np.linalg.eigh(m.data)
    return Spectrum(vals[::-1].copy(), vecs[:, ::-1].copy())


def eigenvalues(m: MultipartiteOperator) -> np.ndarray:
    """Descending eigenvalues of a Hermitian operator."""
    _require_hermitian(m)
    return np.linalg.eigvalsh(m.data)[::-1]


def matrix_abs(m: MultipartiteOperator) -> MultipartiteOperator:
    spec = hermitian_eig(m)
    vecs = spec.eigenvectors
    return MultipartiteOperator(m.dims, (vecs * np.abs(spec.eigenvalues)) @ vecs.conj().T)


def trace_norm(m: MultipartiteOperator) -> float:
    if m.is_hermitian():
        return float(np.sum(np.abs(np.linalg.eigvalsh(m.data))))
    return float(np.sum(np.linalg.svd(m.data, compute_uv=False)))


def trace_distance(a: MultipartiteOperator, b: MultipartiteOperator) -> float:
    """(1/2) ||a - b||_Tr."""
    _require_same_dims(a, b)
    return 0.5 * trace_norm(a - b)


def min_eigenvalue(m: MultipartiteOperator) -> float:
    _require_hermitian(m)
    return float(np.linalg.eigvalsh(m.data)[0])


def is_psd(m: MultipartiteOperator, tol: float = PSD_TOL) -> bool:
    return min_eigenvalue(m) >= -tol


def is_unitary(u: np.ndarray, tol: float = 1e-12) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))) <= tol)
