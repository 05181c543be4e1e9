"""Entropies (base 2, 0 log 0 = 0) and the one-way Devetak-Winter key rate."""
import numpy as np

from bound_key.privacy.ccq import CcqState

ZERO_CUTOFF = 1e-15


def shannon_entropy(probs) -> float:
    x = np.asarray(probs, dtype=float).reshape(-1)
    x = x[x > ZERO_CUTOFF]
    return float(-np.sum(x * np.log2(x)))


def binary_entropy(p: float) -> float:
    return shannon_entropy([p, 1.0 - p])


def von_neumann_entropy(rho: np.ndarray) -> float:
    return shannon_entropy(np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)))


def mutual_information_ab(c: CcqState) -> float:
    return shannon_entropy(c.p.sum(axis=1)) + shannon_entropy(c.p.sum(axis=0)) - shannon_entropy(c.p)


def holevo_alice_eve(c: CcqState) -> float:
    """I(A:E) = S(rho_E) - sum_a p_a S(rho_E^a), with Alice as the sender."""
    p_a = c.p.sum(axis=1)
    rho_e = np.zeros((c.eve_dim, c.eve_dim), dtype=complex)
    conditional = 0.0
    for a in range(c.d):
        if p_a[a] <= ZERO_CUTOFF:
            continue
        rho_a = np.zeros_like(rho_e)
        for b in range(c.d):
            if c.eve_states[a][b] is not None:
                rho_a += c.p[a, b] * c.eve_states[a][b]
        rho_e += rho_a
        conditional += p_a[a] * von_neumann_entropy(rho_a / p_a[a])
    return von_neumann_entropy(rho_e) - conditional


def dw_rate(c: CcqState) -> float:
    """I(A:B) - I(A:E), forward communication from Alice."""
    return mutual_information_ab(c) - holevo_alice_eve(c)
