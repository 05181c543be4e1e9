"""verify-state, ppt and export commands."""
import numpy as np

from bound_key.commands.base import BaseCommand
from bound_key.core.exchange import operator_to_dict
from bound_key.core.operator import MultipartiteOperator, min_eigenvalue, partial_transpose, trace_norm
from bound_key.privacy.mixture import mixture_form_report
from bound_key.protocol.recurrence import rho_k_closed_form
from bound_key.reports.report import Report
from bound_key.states.key_shield import (
    BOB_SUBSYSTEMS,
    check_ppt,
    make_rho,
    make_rho_pt_closed_form,
    rho_prefactor,
)
from bound_key.states.projectors import make_projector_family
from bound_key.states.x_family import make_x, numeric_x_family
from bound_key.utils.config import RunConfig
from observability.logger import get_logger
from observability.tracer import trace_command

logger = get_logger("StateCommands")

CLOSED_FORM_TOL = 1e-10
TRACE_NORM_TOL = 1e-10
PROJECTOR_TOL = 1e-12


def _close(a: MultipartiteOperator, b: MultipartiteOperator) -> float:
    return a.max_abs_diff(b)


class VerifyStateCommand(BaseCommand):
    name = "verify-state"
    description = "Check every algebraic property of the projector family, X_D and rho^(D)."

    def _projector_checks(self, report: Report, D: int) -> None:
        fam = make_projector_family(D)
        eye = fam.identity
        for label, m in (("P_plus", fam.p_plus), ("P", fam.p), ("Q", fam.q), ("S", fam.s)):
            report.check(f"projector_idempotent_{label}", _close(m @ m, m) <= PROJECTOR_TOL, _close(m @ m, m), 0.0)
        zero = 0.0 * eye
        pairs = {
            "P_plus_P": fam.p_plus @ fam.p,
            "P_plus_Q": fam.p_plus @ fam.q,
            "P_Q": fam.p @ fam.q,
            "S_I_minus_Q": fam.s @ (eye - fam.q),
        }
        for label, m in pairs.items():
            report.check(f"orthogonal_{label}", _close(m, zero) <= PROJECTOR_TOL, _close(m, zero), 0.0)
        completeness = _close(fam.p_plus + fam.p + fam.q, eye)
        report.check("projector_completeness", completeness <= PROJECTOR_TOL, completeness, 0.0)
        swap_sq = _close(fam.v @ fam.v, eye)
        report.check("swap_squares_to_identity", swap_sq <= PROJECTOR_TOL, swap_sq, 0.0)

    def _x_checks(self, report: Report, config: RunConfig) -> None:
        D = config.D
        closed = make_x(D)
        numeric = numeric_x_family(D)
        x = closed.x.data
        asym = float(max(np.max(np.abs(x - x.T)), np.max(np.abs(x.imag))))
        report.check("x_real_symmetric", asym <= PROJECTOR_TOL, asym, 0.0)
        tn = trace_norm(closed.x)
        report.data["trace_norm_X"] = tn
        report.check("trace_norm_X", abs(tn - 1.0) <= TRACE_NORM_TOL, tn, 1)
        for key, member in closed.members().items():
            if key == "X":
                continue
            dev = _close(member, numeric.members()[key])
            report.check(f"closed_form_{key}", dev <= CLOSED_FORM_TOL, dev, 0.0)
        for key in ("abs_X_then_ptB", "abs_X_ptB_ptB"):
            lam = min_eigenvalue(closed.members()[key])
            report.check(f"psd_{key}", lam >= -config.tol_psd, lam, 0.0)
        shield_trace = closed.abs_x_pt_pt.trace().real
        report.data["trace_abs_X_ptB_ptB"] = shield_trace

    def _rho_checks(self, report: Report, config: RunConfig) -> None:
        D = config.D
        rho = make_rho(D)
        prefactor = rho_prefactor(D)
        report.data["prefactor"] = float(prefactor)
        report.data["prefactor_ratio"] = prefactor
        fam = make_x(D)
        # Unit trace fixes c = 1 / (2 Tr|X| + 2 Tr(|X^T|^T)).
        from_traces = 1.0 / (2.0 * fam.abs_x.trace().real + 2.0 * fam.abs_x_pt_pt.trace().real)
        report.check("prefactor", abs(from_traces - float(prefactor)) <= PROJECTOR_TOL, from_traces, prefactor)

        herm = rho.rho.hermiticity_error()
        report.check("rho_hermitian", herm <= config.tol_herm, herm, 0.0)
        tr = rho.rho.trace().real
        report.check("rho_unit_trace", abs(tr - 1.0) <= config.tol_psd, tr, 1)
        lam = min_eigenvalue(rho.rho)
        report.check("rho_psd", lam >= -config.tol_psd, lam, 0.0)

        worst = 0.0
        for i in range(2):
            for j in range(2):
                for k in range(2):
                    for l in range(2):
                        worst = max(worst, _close(rho.block(i, j, k, l), rho.block(k, l, i, j).dagger()))
        report.check("block_adjoint_symmetry", worst <= config.tol_herm, worst, 0.0)

        ppt = check_ppt(rho, tol=config.tol_psd)
        report.data["ppt"] = ppt.is_ppt
        report.data["pt_min_eigenvalue"] = ppt.min_eigenvalue
        report.check("ppt", ppt.is_ppt, ppt.min_eigenvalue, 0.0)
        pt_dev = _close(partial_transpose(rho.rho, BOB_SUBSYSTEMS), make_rho_pt_closed_form(D))
        report.check("pt_matches_block_form", pt_dev <= config.tol_herm, pt_dev, 0.0)

        form = mixture_form_report(rho)
        report.data["mixture_form"] = {
            "correlated_weight": form.correlated_weight,
            "anticorrelated_weight": form.anticorrelated_weight,
            "correlated_saturation": form.correlated_saturation,
            "anticorrelated_saturation": form.anticorrelated_saturation,
            "leakage_norm": form.leakage_norm,
            "is_mixture_form": form.is_mixture_form(),
        }

    @trace_command
    def run(self, config: RunConfig) -> Report:
        report = self.new_report(config)
        self._projector_checks(report, config.D)
        self._x_checks(report, config)
        self._rho_checks(report, config)
        logger.info("verify-state D=%d: %d checks, ok=%s", config.D, len(report.checks), report.ok)
        return report


class PptCommand(BaseCommand):
    name = "ppt"
    description = "Minimum eigenvalue of rho^(D) after transposing Bob's subsystems."

    @trace_command
    def run(self, config: RunConfig) -> Report:
        report = self.new_report(config)
        ppt = check_ppt(make_rho(config.D), tol=config.tol_psd)
        report.data.update({
            "min_eigenvalue": ppt.min_eigenvalue,
            "pt_trace_norm": ppt.pt_trace_norm,
            "negativity": ppt.negativity,
            "is_ppt": ppt.is_ppt,
        })
        report.check("ppt", ppt.is_ppt, ppt.min_eigenvalue, 0.0)
        return report


class ExportCommand(BaseCommand):
    name = "export"
    description = "Dump a constructed matrix (rho, x, projectors, rho_k) in the JSON exchange format."

    def _matrices(self, config: RunConfig):
        D = config.D
        if config.factory == "rho":
            return {"rho": make_rho(D).rho}
        if config.factory == "x":
            return make_x(D).members()
        if config.factory == "projectors":
            return make_projector_family(D).members()
        k = config.k_or(2)
        return {f"rho_{k}": rho_k_closed_form(D, k, mem_cap=config.resolved_mem_cap()).rho}

    @trace_command
    def run(self, config: RunConfig) -> Report:
        report = self.new_report(config)
        matrices = self._matrices(config)
        for label, op in matrices.items():
            report.exports[label] = operator_to_dict(op)
            report.check(f"hermitian_{label}", op.is_hermitian(config.tol_herm), op.hermiticity_error(), 0.0)
        report.data["exported"] = sorted(matrices)
        report.data["dims"] = {label: list(op.dims) for label, op in matrices.items()}
        return report
