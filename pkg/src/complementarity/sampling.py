"""Seeded random states, density matrices, local unitaries and named families.

Streams come from numpy's Philox4x64 counter-based bit generator keyed by
``SeedSequence(seed, spawn_key=(stream,))``, so a (seed, stream) pair gives the
same draws on every platform.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import BadRank, DomainError
from .localops import LocalUnitary, su2_from_angles
from .qstate import DensityMatrix, PureState, make_pure, validate_density

ALGORITHM = "philox4x64-10"

BELL_PHI_PLUS = np.array([1, 0, 0, 1], dtype=np.complex128) / math.sqrt(2.0)
BELL_PSI_PLUS = np.array([0, 1, 1, 0], dtype=np.complex128) / math.sqrt(2.0)


class SeededSource:
    """Single-consumer random source. Use :meth:`child` to fan out."""

    algorithm = ALGORITHM

    def __init__(self, seed: int, stream: int = 0):
        if not 0 <= seed < 2**64:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = int(seed)
        self.stream = int(stream)
        seq = np.random.SeedSequence(self.seed, spawn_key=(self.stream,))
        self.rng = np.random.Generator(np.random.Philox(seq))

    def child(self, stream: int) -> "SeededSource":
        return SeededSource(self.seed, stream)

    def complex_normal(self, shape) -> np.ndarray:
        re = self.rng.standard_normal(shape)
        im = self.rng.standard_normal(shape)
        return re + 1j * im

    def __repr__(self):
        return f"SeededSource(seed={self.seed}, stream={self.stream})"


def haar_pure(src: SeededSource) -> PureState:
    return make_pure(src.complex_normal(4))


def random_density(src: SeededSource, rank: int = 4) -> DensityMatrix:
    """Ginibre-induced density matrix ``G G^dagger / Tr(G G^dagger)`` with G of shape 4 x rank."""
    if rank not in (1, 2, 3, 4):
        raise BadRank(f"rank must be 1..4, got {rank!r}")
    g = src.complex_normal((4, rank))
    rho = g @ g.conj().T
    return validate_density(rho / np.trace(rho).real)


def random_su2(src: SeededSource) -> np.ndarray:
    # Haar on SU(2): alpha uniform on [0, 2pi), gamma on [0, 4pi), cos(beta) uniform
    alpha = src.rng.uniform(0.0, 2.0 * math.pi)
    beta = math.acos(1.0 - 2.0 * src.rng.uniform())
    gamma = src.rng.uniform(0.0, 4.0 * math.pi)
    return su2_from_angles(alpha, beta, gamma)


def random_local_unitary(src: SeededSource) -> LocalUnitary:
    u1 = random_su2(src)
    u2 = random_su2(src)
    return LocalUnitary(u1, u2)


def werner(p: float) -> DensityMatrix:
    """``p |Phi+><Phi+| + (1 - p) I/4``."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"Werner weight must lie in [0, 1], got {p}")
    bell = np.outer(BELL_PHI_PLUS, BELL_PHI_PLUS.conj())
    return validate_density(p * bell + (1.0 - p) * np.eye(4) / 4.0)


def bell_mixture() -> DensityMatrix:
    """Equal mixture of Phi+ and Psi+: separable, yet with correlated fringes."""
    phi = np.outer(BELL_PHI_PLUS, BELL_PHI_PLUS.conj())
    psi = np.outer(BELL_PSI_PLUS, BELL_PSI_PLUS.conj())
    return validate_density(0.5 * (phi + psi))


def schmidt_state(theta: float) -> PureState:
    """``cos(theta)|00> + sin(theta)|11>``."""
    return make_pure([math.cos(theta), 0.0, 0.0, math.sin(theta)])
