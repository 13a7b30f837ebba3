"""Operators on the truncated atom-field product space.

The Hilbert space is (two-level atom) x (Fock space cut at n_max).  The
composite basis is atom-major:

    index(atom, n) = atom * (n_max + 1) + n

with atom = 0 the lower level |1>, atom = 1 the upper level |2>, and
n = 0 .. n_max the photon number.  All operators are dense complex
arrays; sparsity is an implementation detail of the superoperator
assembly, not of this module.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SpaceConfig:
    """Truncation record for the composite space."""

    n_max: int

    def __post_init__(self) -> None:
        if self.n_max < 1:
            raise ValueError("n_max must be at least 1")

    @property
    def field_dim(self) -> int:
        """Number of retained Fock states, n_max + 1."""
        return self.n_max + 1

    @property
    def dim(self) -> int:
        """Dimension of the composite space, 2 * (n_max + 1)."""
        return 2 * (self.n_max + 1)

    def index(self, atom: int, n: int) -> int:
        """Composite basis index of |atom, n>."""
        if atom not in (0, 1):
            raise ValueError("atom must be 0 (lower) or 1 (upper)")
        if not 0 <= n <= self.n_max:
            raise ValueError(f"photon number {n} outside 0..{self.n_max}")
        return atom * self.field_dim + n


def annihilation(n_max: int) -> np.ndarray:
    """Photon annihilation operator on the truncated Fock space.

    a|n> = sqrt(n) |n-1>, i.e. the only nonzero entries are
    a[n-1, n] = sqrt(n).  The truncation makes a a^dag - a^dag a deviate
    from the identity in the last row/column; callers monitor the
    population near the cutoff instead of pretending the commutator is
    exact.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    return np.diag(np.sqrt(np.arange(1.0, n_max + 1.0)), k=1).astype(complex)


def atom_lowering() -> np.ndarray:
    """Atomic lowering operator |1><2| in the basis (|1>, |2>)."""
    s = np.zeros((2, 2), dtype=complex)
    s[0, 1] = 1.0
    return s


def tensor(atom_op: np.ndarray, field_op: np.ndarray) -> np.ndarray:
    """Kronecker product, atom factor first (matches SpaceConfig.index)."""
    return np.kron(atom_op, field_op)


def field_operator(op: np.ndarray, space: SpaceConfig) -> np.ndarray:
    """Lift a field-only operator to the composite space."""
    if op.shape != (space.field_dim, space.field_dim):
        raise ValueError("operator shape does not match the field dimension")
    return tensor(np.eye(2, dtype=complex), op)


def atom_operator(op: np.ndarray, space: SpaceConfig) -> np.ndarray:
    """Lift an atom-only operator to the composite space."""
    if op.shape != (2, 2):
        raise ValueError("atom operators are 2 x 2")
    return tensor(op, np.eye(space.field_dim, dtype=complex))


def inversion_operator(space: SpaceConfig) -> np.ndarray:
    """Population inversion |2><2| - |1><1|, lifted to the composite space."""
    return atom_operator(np.diag([-1.0, 1.0]).astype(complex), space)


def basis_projector(space: SpaceConfig, atom: int, n: int) -> np.ndarray:
    """Projector onto the composite basis state |atom, n>."""
    p = np.zeros((space.dim, space.dim), dtype=complex)
    i = space.index(atom, n)
    p[i, i] = 1.0
    return p
