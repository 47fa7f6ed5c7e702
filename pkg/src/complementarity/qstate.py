"""Two-qubit pure and mixed states.

Basis order is |00>, |01>, |10>, |11> with qubit 1 as the left tensor factor.
Reduced Bloch vectors use r_x = 2 Re rho_01, r_y = -2 Im rho_01,
r_z = rho_00 - rho_11.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .errors import (
    BadShape,
    BadTrace,
    NotHermitian,
    NotPositive,
    ParseError,
    ZeroVector,
)

NORM_FLOOR = 1e-14
VALIDATION_TOL = 1e-9


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=np.complex128)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PureState:
    """Normalized amplitudes (a, b, c, d)."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (4,):
            raise BadShape(f"expected 4 amplitudes, got shape {amps.shape}")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def a(self) -> complex:
        return complex(self.amplitudes[0])

    @property
    def b(self) -> complex:
        return complex(self.amplitudes[1])

    @property
    def c(self) -> complex:
        return complex(self.amplitudes[2])

    @property
    def d(self) -> complex:
        return complex(self.amplitudes[3])


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Validated 4x4 two-qubit density matrix. Build through validate_density."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))

    @property
    def tensor(self) -> np.ndarray:
        """Entries reshaped to rho[i, j, k, l] = <ij|rho|kl>."""
        return self.entries.reshape(2, 2, 2, 2)


@dataclass(frozen=True, eq=False)
class ReducedState:
    """Single-qubit density matrix of one subsystem."""

    entries: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries))

    @property
    def bloch(self) -> np.ndarray:
        rho = self.entries
        return np.array(
            [2.0 * rho[0, 1].real, -2.0 * rho[0, 1].imag, (rho[0, 0] - rho[1, 1]).real]
        )


StateLike = Union[PureState, DensityMatrix]


def make_pure(amplitudes) -> PureState:
    """Normalize four complex amplitudes into a PureState.

    Raises
    ------
    ZeroVector
        If the input norm is below 1e-14.
    """
    amps = np.asarray(amplitudes, dtype=np.complex128).reshape(-1)
    if amps.shape != (4,):
        raise BadShape(f"expected 4 amplitudes, got {amps.size}")
    norm = np.linalg.norm(amps)
    if not np.isfinite(norm) or norm < NORM_FLOOR:
        raise ZeroVector(f"amplitude vector norm {norm:.3e} is too small")
    return PureState(amps / norm)


def to_density(state: PureState) -> DensityMatrix:
    psi = state.amplitudes
    return DensityMatrix(np.outer(psi, psi.conj()))


def validate_density(entries) -> DensityMatrix:
    """Check and repair a candidate 4x4 density matrix.

    The matrix is rejected if it is not Hermitian, has an eigenvalue below
    -1e-9, or has trace off by more than 1e-9. Small negative eigenvalues are
    clipped to zero and the trace is renormalized.
    """
    rho = np.asarray(entries, dtype=np.complex128)
    if rho.shape != (4, 4):
        raise BadShape(f"expected a 4x4 matrix, got shape {rho.shape}")
    if not np.all(np.isfinite(rho)):
        raise BadShape("matrix contains non-finite entries")
    skew = np.max(np.abs(rho - rho.conj().T))
    if skew > VALIDATION_TOL:
        raise NotHermitian(f"max |rho_ij - conj(rho_ji)| = {skew:.3e}")
    rho = 0.5 * (rho + rho.conj().T)

    evals, evecs = np.linalg.eigh(rho)
    if evals[0] < -VALIDATION_TOL:
        raise NotPositive(f"smallest eigenvalue {evals[0]:.3e}")

    trace = np.trace(rho).real
    if abs(trace - 1.0) > VALIDATION_TOL:
        raise BadTrace(f"trace {trace:.12g}")

    if evals[0] < 0.0:
        evals = np.clip(evals, 0.0, None)
        rho = (evecs * evals) @ evecs.conj().T
        rho = 0.5 * (rho + rho.conj().T)
        trace = np.trace(rho).real
        rho = rho / trace
    elif abs(trace - 1.0) > 4 * np.finfo(float).eps:
        rho = rho / trace
    return DensityMatrix(rho)


def as_density(state: StateLike) -> DensityMatrix:
    if isinstance(state, DensityMatrix):
        return state
    if isinstance(state, PureState):
        return to_density(state)
    raise TypeError(f"expected PureState or DensityMatrix, got {type(state).__name__}")


def partial_trace(rho: StateLike, keep: int) -> ReducedState:
    """Reduced state of subsystem ``keep`` (1 or 2)."""
    t = as_density(rho).tensor
    if keep == 1:
        return ReducedState(np.einsum("ijkj->ik", t))
    if keep == 2:
        return ReducedState(np.einsum("ijil->jl", t))
    raise ValueError(f"subsystem index must be 1 or 2, got {keep!r}")


def purity(rho: StateLike) -> float:
    entries = as_density(rho).entries
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(entries) ** 2))


def is_pure(rho: StateLike, tol: float = 1e-9) -> bool:
    return purity(rho) >= 1.0 - tol


# state files ----------------------------------------------------------------


def _complex_from_pair(value) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        re, im = value
        if isinstance(re, (int, float)) and isinstance(im, (int, float)):
            return complex(float(re), float(im))
    raise ParseError(f"expected [re, im] pair, got {value!r}")


def parse_state(obj) -> StateLike:
    """Build a state from the decoded JSON state-file object."""
    if not isinstance(obj, dict):
        raise ParseError("state file must contain a JSON object")
    kind = obj.get("kind")
    if kind == "pure":
        amps = obj.get("amplitudes")
        if not isinstance(amps, list) or len(amps) != 4:
            raise ParseError("'amplitudes' must be a list of 4 [re, im] pairs")
        return make_pure([_complex_from_pair(v) for v in amps])
    if kind == "mixed":
        rows = obj.get("rho")
        if not isinstance(rows, list) or len(rows) != 4:
            raise ParseError("'rho' must be a 4x4 list of [re, im] pairs")
        matrix = []
        for row in rows:
            if not isinstance(row, list) or len(row) != 4:
                raise ParseError("'rho' must be a 4x4 list of [re, im] pairs")
            matrix.append([_complex_from_pair(v) for v in row])
        return validate_density(matrix)
    raise ParseError(f"unknown state kind {kind!r}; expected 'pure' or 'mixed'")


def load_state(path) -> StateLike:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} at line {exc.lineno}") from exc
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_state(obj)


def state_to_json(state: StateLike) -> dict:
    if isinstance(state, PureState):
        return {
            "kind": "pure",
            "amplitudes": [[z.real, z.imag] for z in state.amplitudes.tolist()],
        }
    rho = as_density(state).entries
    return {
        "kind": "mixed",
        "rho": [[[z.real, z.imag] for z in row] for row in rho.tolist()],
    }
