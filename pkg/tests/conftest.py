"""Shared fixtures and independent oracle helpers for the test suite."""

import numpy as np
import pytest

from atomlaser.fock import SpaceConfig
from atomlaser.liouvillian import DensityMatrix

# Verdict lines collected by the acceptance tests; emitted after the run so
# output capture cannot swallow them.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance gate")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260814)


def random_density(space: SpaceConfig, rng: np.random.Generator) -> DensityMatrix:
    """Random full-rank density matrix (Wishart construction)."""
    d = space.dim
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    m = g @ g.conj().T
    m = m / np.trace(m).real
    return DensityMatrix(space, m)


def random_hermitian_unit_trace(space: SpaceConfig, rng: np.random.Generator) -> DensityMatrix:
    """Random Hermitian unit-trace matrix, not necessarily positive."""
    d = space.dim
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    h = 0.5 * (g + g.conj().T)
    h = h + (1.0 - np.trace(h).real) / d * np.eye(d)
    return DensityMatrix(space, h.astype(complex))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    """(1/2) sum of absolute eigenvalues of a - b (both Hermitian)."""
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(a - b))))


def row_reduction_rank(mat: np.ndarray, tol: float = 1e-10) -> int:
    """Rank by plain Gaussian elimination, independent of SVD routines."""
    m = np.array(mat, dtype=complex)
    rows, cols = m.shape
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if abs(m[i, c]) > tol:
                pivot = i
                break
        if pivot is None:
            continue
        m[[r, pivot]] = m[[pivot, r]]
        m[r] = m[r] / m[r, c]
        for i in range(rows):
            if i != r:
                m[i] = m[i] - m[i, c] * m[r]
        r += 1
        if r == rows:
            break
    return r
