"""Key-block criterion ||A_{00,11}(D,k)||_Tr -> 1/2 over k."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import pandas as pd

from bound_key.core.operator import trace_distance
from bound_key.errors import DimensionMismatchError
from bound_key.protocol.recurrence import (
    key_block_trace_norm,
    limiting_pbit,
    normalization,
    pbit_distance_closed_form,
    rho_k_closed_form,
)
from bound_key.utils.config import mem_cap as configured_mem_cap
from observability.logger import get_logger

logger = get_logger("Criterion")

CSV_COLUMNS = ["D", "k", "key_block_trace_norm", "gap_to_half", "pbit_trace_distance", "dense_checked"]
DENSE_AGREEMENT_TOL = 1e-10


@dataclass(frozen=True)
class CriterionEntry:
    k: int
    key_block_trace_norm: float
    gap_to_half: float
    pbit_trace_distance: Optional[float]
    dense_checked: bool
    dense_deviation: Optional[float] = None
    analytic_pbit_distance: float = 0.0


@dataclass(frozen=True)
class CriterionSeries:
    D: int
    entries: Tuple[CriterionEntry, ...]

    def entry(self, k: int) -> CriterionEntry:
        for e in self.entries:
            if e.k == k:
                return e
        raise KeyError(k)

    def dense_agrees(self, tol: float = DENSE_AGREEMENT_TOL) -> bool:
        return all(e.dense_deviation <= tol for e in self.entries if e.dense_checked)

    def to_frame(self) -> pd.DataFrame:
        rows = [
            {
                "D": self.D,
                "k": e.k,
                "key_block_trace_norm": e.key_block_trace_norm,
                "gap_to_half": e.gap_to_half,
                "pbit_trace_distance": e.pbit_trace_distance,
                "dense_checked": e.dense_checked,
            }
            for e in self.entries
        ]
        return pd.DataFrame(rows, columns=CSV_COLUMNS)


def _entry(D: int, k: int, cap: int) -> CriterionEntry:
    analytic = 1.0 / normalization(D, k)
    entry = CriterionEntry(
        k=k,
        key_block_trace_norm=analytic,
        gap_to_half=0.5 - analytic,
        pbit_trace_distance=None,
        dense_checked=False,
        analytic_pbit_distance=float(pbit_distance_closed_form(D, k)),
    )
    if 4 * D ** (2 * k) > cap:
        return entry
    state = rho_k_closed_form(D, k, mem_cap=cap)
    pbit = limiting_pbit(D, k, mem_cap=cap)
    deviation = abs(key_block_trace_norm(state) - analytic)
    if deviation > DENSE_AGREEMENT_TOL:
        logger.warning("D=%d k=%d: dense key-block norm deviates by %.3e", D, k, deviation)
    return CriterionEntry(
        k=k,
        key_block_trace_norm=analytic,
        gap_to_half=0.5 - analytic,
        pbit_trace_distance=trace_distance(state.rho, pbit.state.rho),
        dense_checked=True,
        dense_deviation=deviation,
        analytic_pbit_distance=entry.analytic_pbit_distance,
    )


def criterion_series(D: int, k_max: int, mem_cap: Optional[int] = None, max_workers: int = 1) -> CriterionSeries:
    """Closed-form values for k = 1..k_max; dense cross-checks for k within the memory cap.

    Cells are independent, so ``max_workers > 1`` evaluates them on a thread pool;
    entries keep k order either way.
    """
    if D < 3:
        raise DimensionMismatchError(f"Criterion series needs D >= 3, got {D}")
    if k_max < 1:
        raise DimensionMismatchError(f"k_max must be at least 1, got {k_max}")
    cap = configured_mem_cap() if mem_cap is None else mem_cap
    ks = range(1, k_max + 1)
    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            entries: List[CriterionEntry] = list(pool.map(lambda k: _entry(D, k, cap), ks))
    else:
        entries = [_entry(D, k, cap) for k in ks]
    logger.debug("Criterion series D=%d: %d entries, %d dense", D, len(entries), sum(e.dense_checked for e in entries))
    return CriterionSeries(D=D, entries=tuple(entries))
