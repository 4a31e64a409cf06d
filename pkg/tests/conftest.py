"""Shared test helpers: independent oracles and random-state generators.

Oracles here deliberately avoid the package's own gate-application code:
they build full operators with numpy kron products (or scipy expm) so the
implementation is checked against a second, unrelated path.
"""
import numpy as np
import pytest

from qdotsim.qstate import QuantumState

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

PAULIS = {"I": I2, "X": X, "Y": Y, "Z": Z}


def kron_chain(*mats) -> np.ndarray:
    out = np.array([[1.0]], dtype=complex)
    for m in mats:
        out = np.kron(out, m)
    return out


def pauli_string(s: str) -> np.ndarray:
    """Full operator for a Pauli word like 'XZZXI' (qubit 0 leftmost)."""
    return kron_chain(*(PAULIS[c] for c in s))


def embed(op: np.ndarray, targets, n: int) -> np.ndarray:
    """Lift a 1- or 2-qubit operator onto an n-qubit register by kron and
    index permutation (independent of the package's tensor machinery)."""
    k = len(targets)
    rest = [q for q in range(n) if q not in targets]
    big = np.kron(op, np.eye(2 ** (n - k), dtype=complex))
    order = list(targets) + rest
    perm = np.argsort(order)  # logical qubit q sits at axis perm[q]
    big = big.reshape([2] * (2 * n))
    axes = list(perm) + [n + p for p in perm]
    return np.transpose(big, axes).reshape(2**n, 2**n)


def haar_state(n: int, rng) -> QuantumState:
    vec = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    vec /= np.linalg.norm(vec)
    return QuantumState.from_vector(vec)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
