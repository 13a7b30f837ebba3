"""Exact photon statistics in the limit omega = tau -> 0, eta = 0.

When pump and decay are equal and slow compared to the coupling, the
intensity ODE can be solved in closed form.  The quasi-probability
density over coherent intensity is

    P(I) = c0 * I * exp(I) / (1 - 2 I)^(3/2),   0 <= I < 1/2,

with c0 < 0 (the density is negative on the interior, the hallmark of
sub-Poissonian light), and the photon-number distribution it induces is

    rho(n) = C * 2^(-n) * (n + 1) / Gamma(n + 3/2),
    C = sqrt(pi) / (1 + sqrt(2 pi e) * erf(1/sqrt(2))).

Successive terms then satisfy

    rho(n+1) / rho(n) = (n + 2) / ((n + 1)(2 n + 3)),

a ratio that never exceeds 2/3 and stays below 1/2 from n = 1 on, so
the tail beyond any cutoff N >= 1 is bounded by rho(N) itself.  A
competing version of the recurrence with ratio 1/(2 n + 3) circulates;
it disagrees with the closed form already at n = 1 and is kept only in
recurrence_variants for the check suite to reject.
"""

import math
from dataclasses import dataclass

import numpy as np

from .specfun import erf, gamma_half


def norm_constant() -> float:
    """Normalization C = sqrt(pi) / (1 + sqrt(2 pi e) erf(1/sqrt(2)))."""
    return math.sqrt(math.pi) / (
        1.0 + math.sqrt(2.0 * math.pi * math.e) * erf(1.0 / math.sqrt(2.0)))


def p_norm_constant() -> float:
    """Normalization c0 = -2 / (pi (1 + sqrt(2 pi e) erf(1/sqrt(2)))) of P(I)."""
    return -2.0 / (math.pi * (
        1.0 + math.sqrt(2.0 * math.pi * math.e) * erf(1.0 / math.sqrt(2.0))))


def p_function(intensity: float) -> float:
    """Quasi-probability density over coherent intensity, pointwise.

    Defined on [0, 1/2); the density is zero at the origin, negative on
    the open interval and diverges toward the endpoint, so this is
    evaluation-only.  Moments come from the photon distribution, never
    from quadrature against this function.
    """
    if not 0.0 <= intensity < 0.5:
        raise ValueError("intensity must lie in [0, 1/2)")
    return (p_norm_constant() * intensity * math.exp(intensity)
            / (1.0 - 2.0 * intensity) ** 1.5)


@dataclass(frozen=True)
class ExactDistribution:
    """Truncated exact photon distribution with its construction record."""

    probs: np.ndarray
    c_norm: float
    cutoff: int

    def moment(self, k: int) -> float:
        """Sum of n^k over the retained terms."""
        n = np.arange(self.probs.size, dtype=float)
        return float(self.probs @ n ** k)


def exact_distribution(tol: float = 1e-13) -> ExactDistribution:
    """Exact distribution, computed by the term-ratio recurrence.

    Terms are generated from rho(0) = C / Gamma(3/2) until one drops
    below `tol`; by the geometric tail bound the discarded mass is then
    below `tol` as well.  All terms are positive, so the recurrence
    accumulates no cancellation.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    probs = [norm_constant() / gamma_half(1)]
    n = 0
    while probs[-1] >= tol:
        probs.append(probs[-1] * (n + 2.0) / ((n + 1.0) * (2.0 * n + 3.0)))
        n += 1
    return ExactDistribution(probs=np.array(probs), c_norm=norm_constant(), cutoff=n)


def direct_distribution(n_terms: int) -> np.ndarray:
    """First n_terms of the distribution straight from the closed form.

    Independent of the recurrence route (each term is evaluated on its
    own from the gamma function); the test suite pins the two routes
    against each other.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be at least 1")
    c = norm_constant()
    return np.array([c * 2.0 ** (-n) * (n + 1.0) / gamma_half(n + 1)
                     for n in range(n_terms)])


def exact_q() -> float:
    """Mandel Q of the exact distribution."""
    dist = exact_distribution()
    n1 = dist.moment(1)
    n2 = dist.moment(2)
    return (n2 - n1 * n1) / n1 - 1.0


def recurrence_variants(n_terms: int = 40) -> dict[str, np.ndarray]:
    """Normalized distributions from both candidate term ratios.

    'ratio_full' uses (n+2)/((n+1)(2n+3)); 'ratio_simple' uses
    1/(2n+3).  They cannot both reproduce the closed form, and the
    check suite reports which one does.
    """
    out = {}
    for name, ratio in (
            ("ratio_full", lambda n: (n + 2.0) / ((n + 1.0) * (2.0 * n + 3.0))),
            ("ratio_simple", lambda n: 1.0 / (2.0 * n + 3.0))):
        terms = [1.0]
        for n in range(n_terms - 1):
            terms.append(terms[-1] * ratio(n))
        arr = np.array(terms)
        out[name] = arr / arr.sum()
    return out
