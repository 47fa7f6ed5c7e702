"""Two-particle interferometry: fringe simulation and visibility extraction.

Each particle passes a transducer (a unitary that depends on one phase) and
is detected in the first output port. Joint and single-particle detection
probabilities are tabulated on a uniform grid of both phases.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np
from scipy import optimize

from .bell import correlation_matrix
from .errors import DomainError, EmptyPattern, NegativeCorrected
from .localops import I2, bloch_rotation, rotation_to_pole, transducer_symmetric, transducer_with_basis
from .measures import local_quantities
from .qstate import PureState, StateLike, as_density, is_pure, partial_trace

Transducer = Callable[[float], np.ndarray]

MIN_SAMPLES = 8
MIN_TRIALITY_GRID = 64
PROBABILITY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FringeData:
    """Detection probabilities on an ``n x n`` phase grid.

    ``joint[i, j]`` is the coincidence probability at ``(phi1[i], phi2[j])``;
    ``marginal1[i]`` and ``marginal2[j]`` are single-particle probabilities.
    ``ports[i, j, s, t]`` holds all four output-port pairs.
    """

    phi1: np.ndarray
    phi2: np.ndarray
    joint: np.ndarray
    marginal1: np.ndarray
    marginal2: np.ndarray
    ports: np.ndarray
    v1: float
    v2: float
    v12: Optional[float] = None

    @property
    def phase_grid(self) -> list[tuple[float, float]]:
        return [(float(p), float(q)) for p in self.phi1 for q in self.phi2]


def _stack(transducer: Transducer, phases: np.ndarray) -> np.ndarray:
    mats = np.array([np.asarray(transducer(float(p)), dtype=np.complex128) for p in phases])
    if mats.shape != (len(phases), 2, 2):
        raise ValueError("transducer must return a 2x2 matrix for every phase")
    residual = np.max(np.abs(np.einsum("nji,njk->nik", mats.conj(), mats) - I2))
    if residual > 1e-10:
        raise ValueError(f"transducer is not unitary (residual {residual:.3e})")
    return mats


def simulate_fringes(
    rho: StateLike,
    transducer1: Transducer = transducer_symmetric,
    transducer2: Transducer = transducer_symmetric,
    grid_n: int = 256,
) -> FringeData:
    if grid_n < MIN_SAMPLES:
        raise ValueError(f"grid_n must be at least {MIN_SAMPLES}, got {grid_n}")
    t = as_density(rho).tensor
    phases = 2.0 * math.pi * np.arange(grid_n) / grid_n
    m1 = _stack(transducer1, phases)
    m2 = _stack(transducer2, phases)

    # ports[a, b, s, t] = <s t| (M1(a) x M2(b)) rho (M1(a) x M2(b))^dagger |s t>
    half = np.einsum("asi,ijkl,ask->asjl", m1, t, m1.conj(), optimize=True)
    ports = np.einsum("btj,asjl,btl->abst", m2, half, m2.conj(), optimize=True).real

    joint = ports[:, :, 0, 0]
    marginal1 = (ports[:, :, 0, 0] + ports[:, :, 0, 1]).mean(axis=1)
    marginal2 = (ports[:, :, 0, 0] + ports[:, :, 1, 0]).mean(axis=0)
    data = FringeData(
        phi1=phases,
        phi2=phases.copy(),
        joint=joint,
        marginal1=marginal1,
        marginal2=marginal2,
        ports=ports,
        v1=visibility_from_fringes(marginal1, refine=True),
        v2=visibility_from_fringes(marginal2, refine=True),
    )
    return replace(data, v12=corrected_two_particle_visibility(data))


# extrema of sampled periodic patterns ----------------------------------------


def _significant_modes(coeffs: np.ndarray, rel: float = 1e-12):
    scale = np.max(np.abs(coeffs))
    if scale == 0.0:
        return np.zeros((0, coeffs.ndim), dtype=int), np.zeros(0, dtype=complex)
    idx = np.argwhere(np.abs(coeffs) > rel * scale)
    freqs = np.stack(
        [np.fft.fftfreq(n, d=1.0 / n)[idx[:, axis]] for axis, n in enumerate(coeffs.shape)],
        axis=1,
    )
    return freqs, coeffs[tuple(idx.T)]


def _periodic_extrema(samples: np.ndarray) -> tuple[float, float]:
    """Max and min of the band-limited interpolant through uniform periodic samples.

    Sub-grid refinement starts from the best sample and stays within one grid
    step of it; the result never falls below the sampled extrema.
    """
    shape = samples.shape
    freqs, coeffs = _significant_modes(np.fft.fftn(samples) / samples.size)
    step = np.array([2.0 * math.pi / n for n in shape])

    def value(phi):
        return float(np.real(np.sum(coeffs * np.exp(1j * (freqs @ phi)))))

    def refine(sign: float) -> float:
        flat = np.argmax(sign * samples)
        grid_point = np.array(np.unravel_index(flat, shape), dtype=float) * step
        best = float(samples.flat[flat])
        if len(coeffs) == 0:
            return best
        bounds = [(p - s, p + s) for p, s in zip(grid_point, step)]
        if len(shape) == 1:
            res = optimize.minimize_scalar(
                lambda x: -sign * value(np.array([x])),
                bounds=bounds[0],
                method="bounded",
                options={"xatol": 1e-12},
            )
        else:
            res = optimize.minimize(
                lambda x: -sign * value(x),
                grid_point,
                method="L-BFGS-B",
                bounds=bounds,
                options={"ftol": 1e-16, "gtol": 1e-13},
            )
        return max(sign * best, -float(res.fun)) * sign

    return refine(1.0), refine(-1.0)


def visibility_from_fringes(pattern, refine: bool = False) -> float:
    """Fringe visibility ``(I_max - I_min) / (I_max + I_min)`` of a sampled pattern.

    With ``refine=True`` the samples are taken to cover exactly one period
    on a uniform grid, and the extrema are located between samples on the
    band-limited interpolant.
    """
    arr = np.asarray(pattern, dtype=float)
    if arr.size == 0:
        raise EmptyPattern("fringe pattern has no samples")
    if arr.size < MIN_SAMPLES:
        raise EmptyPattern(f"fringe pattern needs at least {MIN_SAMPLES} samples, got {arr.size}")
    if np.min(arr) < -PROBABILITY_TOL:
        raise ValueError(f"fringe intensities must be nonnegative, min {np.min(arr):.3e}")
    if refine:
        hi, lo = _periodic_extrema(arr)
    else:
        hi, lo = float(np.max(arr)), float(np.min(arr))
    lo = max(lo, 0.0)
    if hi + lo == 0.0:
        return 0.0
    return float(min(1.0, max(0.0, (hi - lo) / (hi + lo))))


def corrected_joint(f: FringeData) -> np.ndarray:
    """``P12 - P1 P2 + 1/4`` on the phase grid."""
    return f.joint - np.outer(f.marginal1, f.marginal2) + 0.25


def corrected_two_particle_visibility(f: FringeData, path: str = "grid") -> float:
    """Two-particle visibility of the corrected coincidence pattern.

    ``path="grid"`` takes the extrema over both phases (refined between grid
    points). ``path="diagonal"`` reads only the ``phi1 == phi2`` line, which
    suffices when the corrected fringes depend on the phase sum alone, as for
    ``a|00> + d|11>`` with symmetric transducers.
    """
    corrected = corrected_joint(f)
    if np.min(corrected) < -1e-9:
        raise NegativeCorrected(f"corrected joint probability reaches {np.min(corrected):.3e}")
    if path == "grid":
        hi, lo = _periodic_extrema(corrected)
        lo = max(lo, 0.0)
        return float(min(1.0, max(0.0, (hi - lo) / (hi + lo))))
    if path == "diagonal":
        return visibility_from_fringes(np.diagonal(corrected), refine=True)
    raise ValueError(f"unknown path {path!r}")


# transducer choice -------------------------------------------------------------


def _plane_basis(axis: np.ndarray) -> np.ndarray:
    """Two orthonormal columns spanning the plane perpendicular to ``axis``."""
    axis = axis / np.linalg.norm(axis)
    _, _, vt = np.linalg.svd(axis[None, :])
    return vt[1:].T


def matched_basis(rho: StateLike, k: int, fixed: np.ndarray = I2) -> np.ndarray:
    """Basis unitary for the partner of subsystem k that makes V12 reach C.

    Subsystem k keeps the transducer ``symmetric(phi) @ fixed``; it samples
    the great circle perpendicular to ``R(fixed)^T z``. The partner basis
    is chosen so that its own circle contains the direction into which the
    connected correlation matrix maps the best direction of that circle.
    """
    rho = as_density(rho)
    r1 = partial_trace(rho, 1).bloch
    r2 = partial_trace(rho, 2).bloch
    connected = correlation_matrix(rho) - np.outer(r1, r2)
    if k == 2:
        connected = connected.T
    axis = bloch_rotation(fixed).T @ np.array([0.0, 0.0, 1.0])
    plane = _plane_basis(axis)
    u, s, _ = np.linalg.svd(connected.T @ plane)
    if s[0] < 1e-15:
        return I2.copy()
    target = u[:, 0]
    z = np.array([0.0, 0.0, 1.0])
    partner_axis = z - (z @ target) * target
    if np.linalg.norm(partner_axis) < 1e-8:
        x = np.array([1.0, 0.0, 0.0])
        partner_axis = x - (x @ target) * target
    return rotation_to_pole(partner_axis / np.linalg.norm(partner_axis))


def matched_transducers(rho: StateLike, k: int, fixed: np.ndarray = I2) -> tuple[Transducer, Transducer]:
    """(transducer1, transducer2) with ``fixed`` on subsystem k and the matched partner."""
    partner = matched_basis(rho, k, fixed)
    if k == 1:
        return transducer_with_basis(fixed), transducer_with_basis(partner)
    return transducer_with_basis(partner), transducer_with_basis(fixed)


def verify_triality_interferometric(state: PureState, grid_n: int = 256) -> tuple[float, float]:
    """Residuals ``1 - (V12^2 + V_k^2 + P_k^2)`` from simulated fringes, k = 1, 2.

    V12 and V_k come from the simulated patterns; subsystem k uses the
    symmetric transducer, so P_k is its computational-basis predictability.
    """
    if grid_n < MIN_TRIALITY_GRID:
        raise ValueError(f"grid_n must be at least {MIN_TRIALITY_GRID}, got {grid_n}")
    if not is_pure(as_density(state)):
        raise DomainError("the triality equality holds for pure states only")
    residuals = []
    for k in (1, 2):
        t1, t2 = matched_transducers(state, k)
        fringes = simulate_fringes(state, t1, t2, grid_n)
        v_k = fringes.v1 if k == 1 else fringes.v2
        _, p_k, _ = local_quantities(state, k)
        residuals.append(1.0 - (fringes.v12**2 + v_k**2 + p_k**2))
    return residuals[0], residuals[1]


# export --------------------------------------------------------------------


def fringes_to_csv(f: FringeData, stream=None) -> Optional[str]:
    """Write ``phi1,phi2,p12,p1,p2`` rows with 12 significant digits."""
    own = stream is None
    out = io.StringIO() if own else stream
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["phi1", "phi2", "p12", "p1", "p2"])
    for i, p in enumerate(f.phi1):
        for j, q in enumerate(f.phi2):
            writer.writerow(
                [f"{p:.12g}", f"{q:.12g}", f"{f.joint[i, j]:.12g}",
                 f"{f.marginal1[i]:.12g}", f"{f.marginal2[j]:.12g}"]
            )
    return out.getvalue() if own else None
