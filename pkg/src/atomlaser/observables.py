"""Photon statistics and atomic inversion extracted from a state.

The moments reported here are ordinary moments <n^k> of the photon
number, k = 1..4.  Factorial moments m_k = <ad^k a^k>, which is what the
intensity moments of the field measure, are linear combinations:

    m_2 = n2 - n1
    m_3 = n3 - 3 n2 + 2 n1
    m_4 = n4 - 6 n3 + 11 n2 - 6 n1

Setting m_3 = 0 (first-order closure) gives n3 = 3 n2 - 2 n1; setting
m_4 = 0 (second-order closure) gives n4 = 6 n3 - 11 n2 + 6 n1.  The
closed-form results in `analytic` rely on exactly these closures.
"""

import math
from dataclasses import dataclass

import numpy as np

from .fock import inversion_operator
from .liouvillian import DensityMatrix

# Reporting clamps tiny negative probabilities to zero; anything below
# the failure floor is a solver bug and must surface.
_CLAMP_FLOOR = -1e-8


@dataclass(frozen=True)
class MomentSet:
    """Photon moments <n^k> for k = 1..4, inversion d and Mandel Q."""

    n1: float
    n2: float
    n3: float
    n4: float
    d: float
    q: float


def photon_distribution(rho: DensityMatrix) -> np.ndarray:
    """Photon-number distribution, traced over the atom.

    Entry n is <1,n|rho|1,n> + <2,n|rho|2,n>.  Negative entries above
    the failure floor are clamped to zero for reporting; entries below
    it raise, since the solver guarantees positivity to that level.
    """
    pops = np.real(np.diag(rho.matrix))
    f = rho.space.field_dim
    probs = pops[:f] + pops[f:]
    low = float(np.min(probs))
    if low < _CLAMP_FLOOR:
        raise ValueError(f"photon probability {low:.3e} below {_CLAMP_FLOOR:.1e}")
    probs = np.where(probs < 0.0, 0.0, probs)
    total = float(np.sum(probs))
    if abs(total - 1.0) > 1e-8:
        raise ValueError(f"photon distribution sums to {total:.12f}, not 1")
    return probs


def mandel_q(n1: float, n2: float) -> float:
    """Mandel Q parameter (n2 - n1^2)/n1 - 1; nan for vanishing intensity."""
    if n1 < 1e-12:
        return math.nan
    return (n2 - n1 * n1) / n1 - 1.0


def moments(rho: DensityMatrix) -> MomentSet:
    """Photon moments, inversion and Mandel Q of a state."""
    probs = photon_distribution(rho)
    n = np.arange(probs.size, dtype=float)
    n1 = float(probs @ n)
    n2 = float(probs @ n ** 2)
    n3 = float(probs @ n ** 3)
    n4 = float(probs @ n ** 4)
    d = float(np.real(np.trace(rho.matrix @ inversion_operator(rho.space))))
    return MomentSet(n1=n1, n2=n2, n3=n3, n4=n4, d=d, q=mandel_q(n1, n2))


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    """Total variation distance between two distributions over n.

    The shorter array is zero-padded, so distributions with different
    cutoffs compare directly.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    size = max(p.size, q.size)
    pp = np.zeros(size)
    qq = np.zeros(size)
    pp[:p.size] = p
    qq[:q.size] = q
    return 0.5 * float(np.sum(np.abs(pp - qq)))
