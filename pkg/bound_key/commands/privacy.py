"""ccq and pbit-mixture commands."""
import numpy as np

from bound_key.commands.base import BaseCommand
from bound_key.core.operator import trace_distance
from bound_key.privacy.basis import ProductBasis
from bound_key.privacy.ccq import CcqState, ccq, has_key, is_secure
from bound_key.privacy.mixture import biased_pbit_mixture, mixture_form_report
from bound_key.privacy.pdit import random_pbit
from bound_key.privacy.purification import purify
from bound_key.privacy.rates import binary_entropy, dw_rate, holevo_alice_eve, mutual_information_ab
from bound_key.privacy.twisting import Twisting, apply_twisting, twist_purification
from bound_key.protocol.recurrence import rho_k_closed_form
from bound_key.reports.report import Report
from bound_key.utils.config import RunConfig
from observability.logger import get_logger
from observability.tracer import trace_command

logger = get_logger("PrivacyCommands")

DISTRIBUTION_TOL = 1e-10
EVE_STATE_TOL = 1e-9
RATE_BOUND_TOL = 1e-9


def _ccq_data(c: CcqState) -> dict:
    return {
        "p": c.p,
        "eve_dim": c.eve_dim,
        "eve_pairwise_max_distance": c.max_pairwise_distance(),
        "secure": is_secure(c),
        "has_key": has_key(c),
        "mutual_information_ab": mutual_information_ab(c),
        "holevo_alice_eve": holevo_alice_eve(c),
        "dw_rate": dw_rate(c),
    }


class CcqCommand(BaseCommand):
    name = "ccq"
    description = "ccq state of rho^(D,k) in the standard basis: distribution, security verdict, one-way rate."

    @trace_command
    def run(self, config: RunConfig) -> Report:
        report = self.new_report(config)
        k = config.k_or(1)
        state = rho_k_closed_form(config.D, k, mem_cap=config.resolved_mem_cap())
        basis = ProductBasis.standard(2)
        purification = purify(state.rho)
        c = ccq(state, basis, purification=purification)
        report.data.update(_ccq_data(c))

        total = float(c.p.sum())
        report.check("distribution_normalized", abs(total - 1.0) <= DISTRIBUTION_TOL, total, 1)
        key_diag = np.real(np.diag(state.key_marginal().data)).reshape(2, 2)
        marginal_dev = float(np.max(np.abs(key_diag - c.p)))
        report.check("distribution_matches_key_marginal", marginal_dev <= DISTRIBUTION_TOL, marginal_dev, 0.0)

        rng = np.random.default_rng(config.seed)
        twisting = Twisting.random(2, state.shield_size, rng)
        twisted = ccq(
            apply_twisting(state, twisting, basis),
            basis,
            purification=twist_purification(purification, twisting, basis),
        )
        p_dev = float(np.max(np.abs(twisted.p - c.p)))
        report.check("twisting_invariant_distribution", p_dev <= DISTRIBUTION_TOL, p_dev, 0.0)
        eve_dev = max(
            (trace_distance(c.eve_operator(i, j), twisted.eve_operator(i, j)) for i, j in c.outcomes()),
            default=0.0,
        )
        report.check("twisting_invariant_eve_states", eve_dev <= EVE_STATE_TOL, eve_dev, 0.0)
        return report


class PbitMixtureCommand(BaseCommand):
    name = "pbit-mixture"
    description = "One-way rate of p1 gamma1 + p2 sigma_x gamma2 sigma_x against the 1 - h(p1) bound."

    @trace_command
    def run(self, config: RunConfig) -> Report:
        report = self.new_report(config)
        rng = np.random.default_rng(config.seed)
        gamma1 = random_pbit(rng)
        gamma2 = random_pbit(rng)
        mixed = biased_pbit_mixture(gamma1, gamma2, config.p1)
        c = ccq(mixed, ProductBasis.standard(2))
        rate = dw_rate(c)
        bound = 1.0 - binary_entropy(config.p1)
        report.data.update(_ccq_data(c))
        report.data["rate_bound"] = bound

        form = mixture_form_report(mixed)
        report.data["correlated_weight"] = form.correlated_weight
        report.check("mixture_form", form.is_mixture_form(), form.leakage_norm, 0.0)
        report.check("dw_rate_bound", rate >= bound - RATE_BOUND_TOL, rate, bound)
        logger.info("pbit-mixture p1=%.12g: rate %.12g, bound %.12g", config.p1, rate, bound)
        return report
