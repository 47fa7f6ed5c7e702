"""Local unitaries on the two qubits and the interferometer transducers built from them."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .measures import local_quantities
from .qstate import DensityMatrix, StateLike, as_density, partial_trace, validate_density

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)
I2 = np.eye(2, dtype=np.complex128)

# 50/50 beam splitter with a symmetric (i) reflection phase
BEAM_SPLITTER = np.array([[1, 1j], [1j, 1]], dtype=np.complex128) / math.sqrt(2.0)


def rz(angle: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * angle), np.exp(0.5j * angle)])


def ry(angle: float) -> np.ndarray:
    c, s = math.cos(0.5 * angle), math.sin(0.5 * angle)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def su2_from_angles(alpha: float, beta: float, gamma: float) -> np.ndarray:
    """Z-Y-Z Euler form ``Rz(alpha) Ry(beta) Rz(gamma)``."""
    return rz(alpha) @ ry(beta) @ rz(gamma)


@dataclass(frozen=True, eq=False)
class LocalUnitary:
    """A product unitary ``u1 (x) u2``."""

    u1: np.ndarray
    u2: np.ndarray

    @classmethod
    def identity(cls) -> "LocalUnitary":
        return cls(I2.copy(), I2.copy())

    @classmethod
    def from_angles(cls, angles1, angles2) -> "LocalUnitary":
        return cls(su2_from_angles(*angles1), su2_from_angles(*angles2))

    @classmethod
    def on(cls, k: int, u: np.ndarray) -> "LocalUnitary":
        """``u`` on subsystem k, identity on the other."""
        if k == 1:
            return cls(np.asarray(u), I2.copy())
        if k == 2:
            return cls(I2.copy(), np.asarray(u))
        raise ValueError(f"subsystem index must be 1 or 2, got {k!r}")

    @property
    def matrix(self) -> np.ndarray:
        return np.kron(self.u1, self.u2)

    def factor(self, k: int) -> np.ndarray:
        return self.u1 if k == 1 else self.u2


def unitarity_residual(u: np.ndarray) -> float:
    u = np.asarray(u)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def bloch_rotation(u: np.ndarray) -> np.ndarray:
    """SO(3) matrix R with ``u (r.sigma) u^dagger = (R r).sigma``."""
    u = np.asarray(u)
    conj = np.einsum("ab,jbc,dc->jad", u, PAULI, u.conj())
    return 0.5 * np.einsum("iba,jab->ij", PAULI, conj).real


def rotation_to_pole(direction) -> np.ndarray:
    """SU(2) element rotating the Bloch direction ``direction`` onto +z."""
    x, y, z = np.asarray(direction, dtype=float)
    if math.hypot(math.hypot(x, y), z) == 0.0:
        return I2.copy()
    theta = math.atan2(math.hypot(x, y), z)
    phi = math.atan2(y, x)
    return su2_from_angles(0.0, -theta, -phi)


def rotation_to_equator(direction) -> np.ndarray:
    """SU(2) element rotating the Bloch direction ``direction`` onto +x."""
    x, y, z = np.asarray(direction, dtype=float)
    if math.hypot(math.hypot(x, y), z) == 0.0:
        return I2.copy()
    theta = math.atan2(math.hypot(x, y), z)
    phi = math.atan2(y, x)
    return su2_from_angles(0.0, 0.5 * math.pi - theta, -phi)


def apply_local(U: LocalUnitary, rho: StateLike) -> DensityMatrix:
    """Return ``(u1 x u2) rho (u1 x u2)^dagger``."""
    m = U.matrix
    return validate_density(m @ as_density(rho).entries @ m.conj().T)


def maximize_visibility(rho: StateLike, k: int) -> tuple[float, LocalUnitary]:
    """Largest single-particle visibility reachable by a local unitary on subsystem k.

    The reduced Bloch vector is rotated into the equatorial plane, where all
    of its length shows up as visibility and none as predictability. The
    returned value is read back from the transformed state.
    """
    rho = as_density(rho)
    bloch = partial_trace(rho, k).bloch
    U = LocalUnitary.on(k, rotation_to_equator(bloch))
    v_max, _, _ = local_quantities(apply_local(U, rho), k)
    return v_max, U


def maximize_predictability(rho: StateLike, k: int) -> tuple[float, LocalUnitary]:
    """Counterpart of maximize_visibility: align the Bloch vector with the z axis."""
    rho = as_density(rho)
    bloch = partial_trace(rho, k).bloch
    U = LocalUnitary.on(k, rotation_to_pole(bloch))
    _, p_max, _ = local_quantities(apply_local(U, rho), k)
    return p_max, U


def phase_shifter(phase: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * phase)]).astype(np.complex128)


def transducer_symmetric(phase: float) -> np.ndarray:
    """Phase shifter followed by a symmetric 50/50 beam splitter."""
    return BEAM_SPLITTER @ phase_shifter(phase)


def transducer_with_basis(w: np.ndarray) -> Callable[[float], np.ndarray]:
    """Transducer family that applies the fixed unitary ``w`` before the symmetric one."""
    w = np.asarray(w, dtype=np.complex128)

    def family(phase: float) -> np.ndarray:
        return transducer_symmetric(phase) @ w

    return family
