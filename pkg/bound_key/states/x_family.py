"""The X_D matrix on the shield C^D (x) C^D and its absolute-value / partial
transpose variants.

All members are shipped in closed form as projector combinations scaled by
``1/(D^2 + 2D - 4)``; ``numeric_x_family`` rebuilds them by brute force from X_D
so the two paths can be compared.
"""
from dataclasses import dataclass
from fractions import Fraction

from bound_key.core.operator import MultipartiteOperator, matrix_abs, partial_transpose
from bound_key.errors import DimensionMismatchError
from bound_key.states.projectors import ProjectorFamily, make_projector_family
from observability.logger import get_logger

logger = get_logger("XFamily")

# B' is the second shield factor.
SHIELD_B = 1


def normalizer_exact(D: int) -> Fraction:
    return Fraction(1, D * D + 2 * D - 4)


@dataclass(frozen=True, eq=False)
class XFamily:
    D: int
    x: MultipartiteOperator
    abs_x: MultipartiteOperator
    x_pt: MultipartiteOperator
    abs_x_pt: MultipartiteOperator
    abs_x_pt_pt: MultipartiteOperator
    pt_abs_x: MultipartiteOperator
    normalizer: float
    projectors: ProjectorFamily

    @property
    def normalizer_exact(self) -> Fraction:
        return normalizer_exact(self.D)

    def members(self):
        return {
            "X": self.x,
            "abs_X": self.abs_x,
            "X_ptB": self.x_pt,
            "abs_X_ptB": self.abs_x_pt,
            "abs_X_ptB_ptB": self.abs_x_pt_pt,
            "abs_X_then_ptB": self.pt_abs_x,
        }


def _check_dimension(D: int) -> None:
    if D < 3:
        raise DimensionMismatchError(
            f"X_D is defined for D >= 3 (unit trace norm fails at D={D})"
        )


def make_x(D: int) -> XFamily:
    _check_dimension(D)
    fam = make_projector_family(D)
    n = float(normalizer_exact(D))
    ident, diag = fam.identity, fam.diagonal
    family = XFamily(
        D=D,
        x=n * ((D - 2) * fam.p_plus - 2.0 * fam.p + fam.q),
        abs_x=n * ((D - 2) * fam.p_plus + 2.0 * fam.p + fam.q),
        x_pt=n * (2.0 * fam.s - (ident - fam.q)),
        abs_x_pt=n * (2.0 * fam.s + ident - fam.q),
        abs_x_pt_pt=n * (D * fam.p_plus + fam.q),
        # |X_D|^{T_B'}: P_+ -> V/D under the transpose, the diagonal is fixed.
        pt_abs_x=n * ((D - 4) / D * fam.v + ident + diag),
        normalizer=n,
        projectors=fam,
    )
    logger.debug("Built X family for D=%d", D)
    return family


def numeric_x_family(D: int) -> XFamily:
    """Same members computed from X_D with matrix_abs / partial_transpose."""
    closed = make_x(D)
    x = closed.x
    abs_x = matrix_abs(x)
    x_pt = partial_transpose(x, [SHIELD_B])
    abs_x_pt = matrix_abs(x_pt)
    return XFamily(
        D=D,
        x=x,
        abs_x=abs_x,
        x_pt=x_pt,
        abs_x_pt=abs_x_pt,
        abs_x_pt_pt=partial_transpose(abs_x_pt, [SHIELD_B]),
        pt_abs_x=partial_transpose(abs_x, [SHIELD_B]),
        normalizer=closed.normalizer,
        projectors=closed.projectors,
    )
