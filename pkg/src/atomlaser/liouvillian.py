"""Dimensionless master equation for a one-atom laser with incoherent pump.

Time is measured in units of 1/(2g), with g the atom-field coupling.  In
these units the equation of motion reads

    d rho / ds = (1/2) [ad s - sd a, rho]
               + (tau/2)   (2 a  rho ad - ad a rho - rho ad a)
               + (eta/2)   (2 s  rho sd - sd s rho - rho sd s)
               + (omega/2) (2 sd rho s  - s sd rho - rho s sd)

where a is the photon annihilation operator, s the atomic lowering
operator, and the three rates are the cavity decay, spontaneous emission
and pump rates divided by 2g.  On resonance the coherent part carries no
explicit Hamiltonian term beyond the coupling commutator above.

Superoperators act on column-stacked density matrices: for the matrix
unit rho -> A rho B the matrix representation is kron(B.T, A).  The
steady state is obtained by replacing one redundant row of the singular
generator with the trace functional.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

from .fock import SpaceConfig, annihilation, atom_lowering, atom_operator, field_operator


class DegenerateLiouvillianError(RuntimeError):
    """The steady state is not unique (or the constrained solve failed)."""


class TruncationError(RuntimeError):
    """Steady-state population near the Fock cutoff exceeds the threshold."""

    def __init__(self, message: str, tail_mass: float, n_max: int):
        super().__init__(message)
        self.tail_mass = tail_mass
        self.n_max = n_max


class StepSizeError(RuntimeError):
    """Trace drift during time evolution exceeded the allowed bound."""


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless rates (pump, spontaneous emission, cavity decay).

    omega = pump / 2g, eta = gamma / 2g, tau = kappa / 2g.  All three
    must be finite and nonnegative; zero values are legitimate limits
    (tau = eta = 0 is the regime with an exact photon distribution).
    """

    omega: float
    eta: float
    tau: float

    def __post_init__(self) -> None:
        for name in ("omega", "eta", "tau"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v!r}")
            if v < 0:
                raise ValueError(f"{name} must be nonnegative, got {v!r}")

    @classmethod
    def from_dimensional(cls, g: float, kappa: float, gamma: float, pump: float) -> "ModelParams":
        """Build the dimensionless rates from laboratory parameters."""
        if not g > 0:
            raise ValueError("coupling g must be positive")
        return cls(omega=pump / (2.0 * g), eta=gamma / (2.0 * g), tau=kappa / (2.0 * g))


@dataclass(frozen=True)
class DensityMatrix:
    """A state on the composite space together with its truncation record."""

    space: SpaceConfig
    matrix: np.ndarray

    def __post_init__(self) -> None:
        d = self.space.dim
        if self.matrix.shape != (d, d):
            raise ValueError(f"matrix shape {self.matrix.shape} does not match dim {d}")

    def validate(self, hermiticity_tol: float = 1e-10, trace_tol: float = 1e-10,
                 eig_floor: float = -1e-8) -> None:
        """Check hermiticity, unit trace and positivity up to tolerances.

        Violations signal solver bugs, so they raise instead of being
        silently repaired.
        """
        m = self.matrix
        herm = np.max(np.abs(m - m.conj().T))
        if herm > hermiticity_tol:
            raise ValueError(f"hermiticity defect {herm:.3e} exceeds {hermiticity_tol:.1e}")
        tr = np.trace(m)
        if abs(tr - 1.0) > trace_tol:
            raise ValueError(f"trace {tr:.12f} deviates from 1 by more than {trace_tol:.1e}")
        lo = float(np.min(np.linalg.eigvalsh(0.5 * (m + m.conj().T))))
        if lo < eig_floor:
            raise ValueError(f"negative eigenvalue {lo:.3e} below floor {eig_floor:.1e}")


@dataclass(frozen=True)
class SteadyStateResult:
    """Steady state plus the diagnostics needed to trust it."""

    rho: DensityMatrix
    residual: float    # max-norm of the generator applied to rho
    tail_mass: float   # photon population in the top three Fock levels


def basis_state(space: SpaceConfig, atom: int, n: int) -> DensityMatrix:
    """Pure composite basis state |atom, n><atom, n| as a density matrix."""
    d = space.dim
    m = np.zeros((d, d), dtype=complex)
    i = space.index(atom, n)
    m[i, i] = 1.0
    return DensityMatrix(space, m)


@lru_cache(maxsize=16)
def _composite_ops(n_max: int):
    """Cached composite-space operators for a given truncation."""
    space = SpaceConfig(n_max)
    a = field_operator(annihilation(n_max), space)
    s = atom_operator(atom_lowering(), space)
    ad = a.conj().T
    sd = s.conj().T
    coupling = ad @ s - sd @ a  # anti-Hermitian generator of the coherent part
    return {
        "a": a, "ad": ad, "s": s, "sd": sd,
        "ada": ad @ a, "sds": sd @ s, "ssd": s @ sd,
        "coupling": coupling,
    }


def apply_rhs(rho: DensityMatrix, params: ModelParams) -> np.ndarray:
    """Right-hand side of the master equation at the given state."""
    ops = _composite_ops(rho.space.n_max)
    m = rho.matrix
    out = 0.5 * (ops["coupling"] @ m - m @ ops["coupling"])
    if params.tau:
        out += 0.5 * params.tau * (2.0 * ops["a"] @ m @ ops["ad"]
                                   - ops["ada"] @ m - m @ ops["ada"])
    if params.eta:
        out += 0.5 * params.eta * (2.0 * ops["s"] @ m @ ops["sd"]
                                   - ops["sds"] @ m - m @ ops["sds"])
    if params.omega:
        out += 0.5 * params.omega * (2.0 * ops["sd"] @ m @ ops["s"]
                                     - ops["ssd"] @ m - m @ ops["ssd"])
    return out


def _lindblad_term(c: sp.spmatrix, rate: float, identity: sp.spmatrix) -> sp.spmatrix:
    # (rate/2) * (2 kron(conj(c), c) - kron(I, cd c) - kron((cd c).T, I))
    cdc = (c.conj().T @ c).tocsr()
    return 0.5 * rate * (2.0 * sp.kron(c.conj(), c, format="csr")
                         - sp.kron(identity, cdc, format="csr")
                         - sp.kron(cdc.T, identity, format="csr"))


def _superoperator(params: ModelParams, space: SpaceConfig) -> sp.csr_matrix:
    """Sparse matrix of the generator on column-stacked density matrices."""
    ops = _composite_ops(space.n_max)
    eye = sp.identity(space.dim, dtype=complex, format="csr")
    coupling = sp.csr_matrix(ops["coupling"])
    gen = 0.5 * (sp.kron(eye, coupling, format="csr")
                 - sp.kron(coupling.T, eye, format="csr"))
    if params.tau:
        gen = gen + _lindblad_term(sp.csr_matrix(ops["a"]), params.tau, eye)
    if params.eta:
        gen = gen + _lindblad_term(sp.csr_matrix(ops["s"]), params.eta, eye)
    if params.omega:
        gen = gen + _lindblad_term(sp.csr_matrix(ops["sd"]), params.omega, eye)
    return gen.tocsr()


def build_superoperator(params: ModelParams, space: SpaceConfig) -> np.ndarray:
    """Dense matrix of the generator, for inspection and spectral work.

    The steady-state path assembles the same matrix sparsely; this dense
    view exists so tests and spectral diagnostics can treat the generator
    as an ordinary array.  Size is (2(n_max+1))^2 squared, so keep n_max
    modest here.
    """
    return _superoperator(params, space).toarray()


def _row_max_norms(mat: sp.csr_matrix) -> np.ndarray:
    out = np.zeros(mat.shape[0])
    absdata = np.abs(mat.data)
    counts = np.diff(mat.indptr)
    nonempty = counts > 0
    if np.any(nonempty):
        out[nonempty] = np.maximum.reduceat(absdata, mat.indptr[:-1][nonempty])
    return out


def _tail_mass(mat: np.ndarray, space: SpaceConfig) -> float:
    pops = np.real(np.diag(mat))
    f = space.field_dim
    photon = pops[:f] + pops[f:]
    return float(np.sum(photon[max(0, space.n_max - 2):]))


def steady_state(params: ModelParams, space: SpaceConfig, tol: float = 1e-10,
                 tail_threshold: float = 1e-10, replace_row: int | None = None) -> SteadyStateResult:
    """Unique steady state of the generator at the given truncation.

    The singular linear system L x = 0 is closed by replacing one row
    with the trace functional (right-hand side 1).  Only the rows of
    diagonal matrix elements are candidates: trace preservation makes
    exactly those rows sum to zero, so removing one of them keeps the
    row space intact, while dropping any off-diagonal row provably
    leaves a singular system.  The default is the candidate with the
    smallest max-norm (conditioning); `replace_row` overrides the
    choice among the diagonal rows, and the result must not depend on
    it (that independence is a test).

    Raises DegenerateLiouvillianError when the steady state is not
    unique (for instance omega = tau = 0, where every mixture of
    disconnected dark states is stationary) and TruncationError when
    the top three Fock levels hold more than `tail_threshold` of the
    photon population.
    """
    if params.omega == 0.0 and params.tau == 0.0:
        raise DegenerateLiouvillianError(
            "omega = tau = 0 leaves a degenerate steady-state manifold")
    gen = _superoperator(params, space)
    d = space.dim
    n2 = d * d

    # column-stacked index of the diagonal entry (i, i) is i * (d + 1)
    diag_rows = np.arange(d) * (d + 1)
    if replace_row is None:
        norms = _row_max_norms(gen)
        replace_row = int(diag_rows[np.argmin(norms[diag_rows])])
    elif replace_row not in diag_rows:
        raise ValueError(
            f"replace_row must be the row of a diagonal element, one of i*{d + 1} "
            f"for i in 0..{d - 1}; got {replace_row}")

    trace_row = sp.csr_matrix(
        (np.ones(d, dtype=complex), (np.zeros(d, dtype=int), diag_rows)),
        shape=(1, n2))
    keep = np.ones(n2, dtype=bool)
    keep[replace_row] = False
    constrained = sp.vstack([gen[keep], trace_row], format="csr")
    rhs = np.zeros(n2, dtype=complex)
    rhs[-1] = 1.0

    with np.errstate(all="ignore"):
        x = spsolve(constrained.tocsc(), rhs)
    if not np.all(np.isfinite(x)):
        raise DegenerateLiouvillianError(
            "constrained steady-state solve produced non-finite entries")

    mat = x.reshape(d, d, order="F")
    mat = 0.5 * (mat + mat.conj().T)
    mat = mat / np.real(np.trace(mat))

    residual = float(np.max(np.abs(gen @ mat.reshape(-1, order="F"))))
    if residual > tol:
        raise DegenerateLiouvillianError(
            f"steady-state residual {residual:.3e} exceeds tol {tol:.1e}; "
            "the constrained system is numerically singular")

    tail = _tail_mass(mat, space)
    if tail > tail_threshold:
        raise TruncationError(
            f"tail mass {tail:.3e} at n_max={space.n_max} exceeds "
            f"{tail_threshold:.1e}; retry with a larger truncation",
            tail_mass=tail, n_max=space.n_max)

    rho = DensityMatrix(space, mat)
    rho.validate()
    return SteadyStateResult(rho=rho, residual=residual, tail_mass=tail)


def steady_state_adaptive(params: ModelParams, n_max: int = 20, tol: float = 1e-10,
                          tail_threshold: float = 1e-10, max_n_max: int = 80) -> SteadyStateResult:
    """steady_state with the truncation doubled until the tail test passes."""
    current = n_max
    while True:
        try:
            return steady_state(params, SpaceConfig(current), tol=tol,
                                tail_threshold=tail_threshold)
        except TruncationError:
            if 2 * current > max_n_max:
                raise
            current = 2 * current


def max_step(params: ModelParams, space: SpaceConfig) -> float:
    """Largest RK4 step compatible with the stiffest rate in the model."""
    return 0.1 / max(1.0, params.omega, params.eta, params.tau * space.n_max)


def evolve(rho0: DensityMatrix, params: ModelParams, duration: float,
           dt: float | None = None) -> DensityMatrix:
    """Propagate a state for `duration` with fixed-step RK4.

    The state is evolved in vectorized form with the sparse generator.
    The trace is monitored every step; drift beyond 1e-8 raises
    StepSizeError instead of silently renormalizing.
    """
    if duration < 0:
        raise ValueError("duration must be nonnegative")
    cap = max_step(params, rho0.space)
    if dt is None:
        dt = cap
    if dt <= 0:
        raise ValueError("dt must be positive")
    if dt > cap:
        raise StepSizeError(f"dt = {dt:.3e} exceeds the stability cap {cap:.3e}")

    gen = _superoperator(params, rho0.space)
    d = rho0.space.dim
    trace_idx = np.arange(d) * (d + 1)
    v = rho0.matrix.reshape(-1, order="F").astype(complex)

    n_full, remainder = divmod(duration, dt)
    steps = [dt] * int(n_full)
    if remainder > 1e-15 * max(1.0, duration):
        steps.append(remainder)
    for h in steps:
        k1 = gen @ v
        k2 = gen @ (v + 0.5 * h * k1)
        k3 = gen @ (v + 0.5 * h * k2)
        k4 = gen @ (v + h * k3)
        v = v + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        drift = abs(np.sum(v[trace_idx]) - 1.0)
        if drift > 1e-8:
            raise StepSizeError(f"trace drift {drift:.3e} exceeds 1e-8; reduce dt")

    return DensityMatrix(rho0.space, v.reshape(d, d, order="F"))
