"""Private states (pdits): gamma = (1/d) sum_ij |e_i e_i><e_j e_j| (x) U_i sigma U_j^dagger."""
from dataclasses import dataclass
from typing import Any, Dict, Sequence, Tuple

import numpy as np

from bound_key.core.exchange import operator_from_dict, operator_to_dict
from bound_key.core.operator import (
    HERMITIAN_TOL,
    PSD_TOL,
    MultipartiteOperator,
    is_unitary,
    min_eigenvalue,
)
from bound_key.errors import ConstructionError, DimensionMismatchError, ExchangeFormatError, InvalidStateError
from bound_key.privacy.basis import UNITARITY_TOL, ProductBasis
from bound_key.privacy.sampling import random_density_matrix, random_unitary
from bound_key.privacy.twisting import Twisting
from bound_key.states.key_shield import KeyShieldState
from observability.logger import get_logger

logger = get_logger("PrivateState")

MARGINAL_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class PrivateState:
    d: int
    basis: ProductBasis
    sigma: MultipartiteOperator
    unitaries: Tuple[np.ndarray, ...]
    state: KeyShieldState

    def untwisting(self) -> Twisting:
        """Controls U_ii = U_i^dagger, identity off the diagonal: maps gamma to the basic pdit."""
        return Twisting.diagonal([u.conj().T for u in self.unitaries])


def _assemble(basis: ProductBasis, sigma: np.ndarray, unitaries: Sequence[np.ndarray]) -> np.ndarray:
    d = basis.d
    s = sigma.shape[0]
    data = np.zeros((d * d * s, d * d * s), dtype=complex)
    for i in range(d):
        vi = basis.product_vector(i, i)
        for j in range(d):
            vj = basis.product_vector(j, j)
            shield = unitaries[i] @ sigma @ unitaries[j].conj().T
            data += np.kron(np.outer(vi, vj.conj()), shield) / d
    return data


def _check_sigma(sigma: MultipartiteOperator) -> None:
    if len(sigma.dims) != 2:
        raise DimensionMismatchError(f"Shield state needs dims (dA', dB'), got {sigma.dims}")
    if not sigma.is_hermitian(HERMITIAN_TOL):
        raise InvalidStateError("Shield state is not Hermitian")
    if abs(sigma.trace() - 1.0) > PSD_TOL:
        raise InvalidStateError(f"Shield state has trace {sigma.trace().real:.15g}")
    if min_eigenvalue(sigma) < -PSD_TOL:
        raise InvalidStateError("Shield state is not positive semidefinite")


def make_pdit(basis: ProductBasis, sigma: MultipartiteOperator, unitaries: Sequence[np.ndarray]) -> PrivateState:
    _check_sigma(sigma)
    if len(unitaries) != basis.d:
        raise DimensionMismatchError(f"Need {basis.d} shield unitaries, got {len(unitaries)}")
    frozen = []
    for i, u in enumerate(unitaries):
        u = np.array(u, dtype=complex)
        if u.shape != (sigma.size, sigma.size):
            raise DimensionMismatchError(f"U_{i} has shape {u.shape}, shield size is {sigma.size}")
        if not is_unitary(u, UNITARITY_TOL):
            raise InvalidStateError(f"U_{i} is not unitary")
        u.setflags(write=False)
        frozen.append(u)

    dims = (basis.d, basis.d) + sigma.dims
    state = KeyShieldState(MultipartiteOperator(dims, _assemble(basis, sigma.data, frozen)))
    try:
        state.validate()
    except InvalidStateError as e:
        raise ConstructionError(f"Assembled pdit is not a valid state: {e}") from e

    marginal = state.key_marginal().data
    for i in range(basis.d):
        v = basis.product_vector(i, i)
        weight = np.real(v.conj() @ marginal @ v)
        if abs(weight - 1.0 / basis.d) > MARGINAL_TOL:
            raise ConstructionError(f"Key marginal weight {weight:.15g} on |e_{i} e_{i}> is not 1/{basis.d}")
    logger.debug("Built pdit with d=%d and shield %s", basis.d, sigma.dims)
    return PrivateState(d=basis.d, basis=basis, sigma=sigma, unitaries=tuple(frozen), state=state)


def basic_pdit(basis: ProductBasis, sigma: MultipartiteOperator) -> KeyShieldState:
    """(1/d) sum_ij |e_i e_i><e_j e_j| (x) sigma; P_+^(d) (x) sigma in the standard basis."""
    _check_sigma(sigma)
    dims = (basis.d, basis.d) + sigma.dims
    eye = np.eye(sigma.size)
    return KeyShieldState(MultipartiteOperator(dims, _assemble(basis, sigma.data, [eye] * basis.d)))


def random_pdit(rng: np.random.Generator, d: int = 2, shield_dims: Tuple[int, int] = (2, 2)) -> PrivateState:
    """pdit in the standard basis with random sigma and random U_i."""
    size = shield_dims[0] * shield_dims[1]
    sigma = MultipartiteOperator(shield_dims, random_density_matrix(size, rng))
    unitaries = [random_unitary(size, rng) for _ in range(d)]
    return make_pdit(ProductBasis.standard(d), sigma, unitaries)


def random_pbit(rng: np.random.Generator, shield_dims: Tuple[int, int] = (2, 2)) -> PrivateState:
    return random_pdit(rng, 2, shield_dims)


def pdit_to_dict(pdit: PrivateState) -> Dict[str, Any]:
    """Description document: d, shield_dims, sigma, unitaries and basis as exchange matrices."""
    s = pdit.sigma.size
    return {
        "d": pdit.d,
        "shield_dims": list(pdit.sigma.dims),
        "sigma": operator_to_dict(pdit.sigma),
        "unitaries": [operator_to_dict(MultipartiteOperator((s,), u)) for u in pdit.unitaries],
        "basis": {
            "alice": operator_to_dict(MultipartiteOperator((pdit.d,), pdit.basis.alice)),
            "bob": operator_to_dict(MultipartiteOperator((pdit.d,), pdit.basis.bob)),
        },
    }


def pdit_from_dict(obj: Dict[str, Any]) -> PrivateState:
    """Rebuild and re-validate a pdit from its description document."""
    try:
        d = int(obj["d"])
        shield_dims = tuple(int(x) for x in obj["shield_dims"])
        sigma = operator_from_dict(obj["sigma"]).with_dims(shield_dims)
        unitaries = [operator_from_dict(u).data for u in obj["unitaries"]]
        basis = ProductBasis(
            d,
            operator_from_dict(obj["basis"]["alice"]).data,
            operator_from_dict(obj["basis"]["bob"]).data,
        )
    except (KeyError, TypeError) as e:
        raise ExchangeFormatError(f"Malformed pdit document: {e}") from e
    except DimensionMismatchError as e:
        raise ExchangeFormatError(f"Inconsistent pdit document: {e}") from e
    return make_pdit(basis, sigma, unitaries)
