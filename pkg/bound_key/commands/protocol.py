"""criterion and protocol commands."""
import math

from bound_key.commands.base import BaseCommand
from bound_key.protocol.criterion import DENSE_AGREEMENT_TOL, criterion_series
from bound_key.protocol.recurrence import (
    decay_ratio,
    normalization_exact,
    rho_k_closed_form,
    run_protocol,
)
from bound_key.reports.report import Report
from bound_key.states.key_shield import check_ppt
from bound_key.utils.config import RunConfig
from observability.logger import get_logger
from observability.tracer import trace_command

logger = get_logger("ProtocolCommands")

ANALYTIC_TOL = 1e-12
DENSE_TOL = 1e-9
ORACLE_TOL = 1e-10


def _strictly_increasing(values) -> bool:
    return all(b > a for a, b in zip(values, values[1:]))


class CriterionCommand(BaseCommand):
    name = "criterion"
    description = "Key-block trace norm ||A_{00,11}(D,k)||_Tr for k = 1..k_max, with dense cross-checks."

    @trace_command
    def run(self, config: RunConfig) -> Report:
        report = self.new_report(config)
        D = config.D
        series = criterion_series(D, config.k_max, mem_cap=config.resolved_mem_cap())
        report.table = series.to_frame()

        t = decay_ratio(D)
        report.data["decay_ratio"] = t
        report.data["halving_steps"] = math.log(2) / math.log(1 / float(t))

        worst = max(abs(e.key_block_trace_norm - float(1 / normalization_exact(D, e.k))) for e in series.entries)
        report.check("analytic_key_block_norm", worst <= ANALYTIC_TOL, worst, 0.0)
        dense = [e for e in series.entries if e.dense_checked]
        report.data["dense_ks"] = [e.k for e in dense]
        report.check("dense_cross_check", series.dense_agrees(DENSE_TOL), max((e.dense_deviation for e in dense), default=0.0), 0.0)

        norms = [e.key_block_trace_norm for e in series.entries]
        report.check("key_block_norm_increasing", _strictly_increasing(norms), norms[-1], 0.5)
        gaps = [-e.gap_to_half for e in series.entries]
        report.check("gap_to_half_decreasing", _strictly_increasing(gaps), series.entries[-1].gap_to_half, 0.0)
        if len(dense) > 1:
            distances = [-e.pbit_trace_distance for e in dense]
            report.check("pbit_distance_decreasing", _strictly_increasing(distances), -distances[-1], 0.0)
        for e in dense:
            dev = abs(e.pbit_trace_distance - e.analytic_pbit_distance)
            report.check(f"pbit_distance_k{e.k}", dev <= DENSE_TOL, e.pbit_trace_distance, e.analytic_pbit_distance)
        if not series.dense_agrees(DENSE_AGREEMENT_TOL):
            logger.warning("Dense key-block norms drift beyond %.0e", DENSE_AGREEMENT_TOL)
        return report


class ProtocolCommand(BaseCommand):
    name = "protocol"
    description = "Dense C-NOT recurrence over k copies of rho^(D), compared with the closed form."

    @trace_command
    def run(self, config: RunConfig) -> Report:
        report = self.new_report(config)
        D, k = config.D, config.k_or(2)
        cap = config.resolved_mem_cap()
        trace = run_protocol(D, k, mem_cap=cap)

        report.data["steps"] = [
            {
                "step": s.step_index,
                "copies": s.copies,
                "success_probability": s.success_probability,
                "expected_success_probability": s.expected_success_probability,
                "key_block_trace_norm": s.key_block_trace_norm,
                "closed_form_deviation": s.closed_form_deviation,
                "pbit_trace_distance": s.pbit_trace_distance,
            }
            for s in trace.steps
        ]
        report.data["overall_yield"] = trace.overall_yield

        for s in trace.steps:
            report.check(f"oracle_step{s.step_index}", s.closed_form_deviation <= ORACLE_TOL, s.closed_form_deviation, 0.0)
            p_dev = abs(s.success_probability - float(s.expected_success_probability))
            report.check(
                f"success_probability_step{s.step_index}",
                p_dev <= ORACLE_TOL,
                s.success_probability,
                s.expected_success_probability,
            )
            expected_norm = 1 / normalization_exact(D, s.copies)
            report.check(
                f"key_block_norm_step{s.step_index}",
                abs(s.key_block_trace_norm - float(expected_norm)) <= DENSE_TOL,
                s.key_block_trace_norm,
                expected_norm,
            )

        final = trace.final_state if trace.steps else rho_k_closed_form(D, 1, mem_cap=cap)
        ppt = check_ppt(final, tol=config.tol_psd)
        report.check("final_state_ppt", ppt.is_ppt, ppt.min_eigenvalue, 0.0)
        return report
