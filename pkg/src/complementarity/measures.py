"""Concurrence, visibility, predictability and the quantities built from them."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .errors import DomainError, InconsistentInputs
from .qstate import (
    PureState,
    StateLike,
    as_density,
    is_pure,
    make_pure,
    partial_trace,
    purity,
)

SIGMA_Y = np.array([[0, -1j], [1j, 0]])
YY = np.kron(SIGMA_Y, SIGMA_Y).real  # antidiag(-1, 1, 1, -1)

# eigenvalues of rho below this are treated as exact zeros in the Wootters
# construction; eigh noise would otherwise enter the lambdas as sqrt(noise)
_SPECTRUM_FLOOR = 1e-14


def spin_flip(state: PureState) -> PureState:
    """Return (sigma_y x sigma_y)|psi*>, i.e. (-d*, c*, b*, -a*)."""
    return make_pure(YY @ state.amplitudes.conj())


def concurrence_pure(state: PureState) -> float:
    a, b, c, d = state.amplitudes
    return min(1.0, 2.0 * abs(a * d - b * c))


def concurrence_mixed(rho: StateLike) -> float:
    """Wootters concurrence of a general two-qubit state.

    The lambdas are the square roots of the eigenvalues of
    rho (sy x sy) rho* (sy x sy). They are computed here as the singular
    values of tau = W^T (sy x sy) W, where the columns of W are the
    subnormalized eigenvectors sqrt(p_i)|e_i> of rho; tau tau^dagger has the
    same spectrum and the SVD keeps full accuracy for rank-deficient input.
    """
    entries = as_density(rho).entries
    evals, evecs = np.linalg.eigh(entries)
    evals = np.where(evals > _SPECTRUM_FLOOR, evals, 0.0)
    w = evecs * np.sqrt(evals)
    tau = w.T @ YY @ w
    lam = np.linalg.svd(tau, compute_uv=False)  # descending
    return float(min(1.0, max(0.0, lam[0] - lam[1] - lam[2] - lam[3])))


def local_quantities(rho: StateLike, k: int) -> tuple[float, float, float]:
    """Visibility, predictability and their quadrature sum for subsystem k.

    Returns
    -------
    (V_k, P_k, S_k)
        ``V_k = 2|rho_01|``, ``P_k = |rho_00 - rho_11|`` of the reduced state,
        ``S_k = sqrt(V_k**2 + P_k**2)``.
    """
    red = partial_trace(rho, k).entries
    v = 2.0 * abs(red[0, 1])
    p = abs((red[0, 0] - red[1, 1]).real)
    return float(v), float(p), float(math.hypot(v, p))


def binary_entropy(x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"binary entropy needs 0 <= x <= 1, got {x}")
    if x == 0.0 or x == 1.0:
        return 0.0
    return float(-x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x))


def entanglement_of_formation(concurrence: float) -> float:
    # sqrt(1 - C^2) here; the +C^2 variant leaves the domain of h for C > 0
    if not 0.0 <= concurrence <= 1.0:
        raise DomainError(f"concurrence must lie in [0, 1], got {concurrence}")
    return binary_entropy(0.5 * (1.0 + math.sqrt(1.0 - concurrence * concurrence)))


def derived_quantities(C: float, V: float, P: float, tol: float = 1e-9) -> tuple[float, float]:
    """Distinguishability and erasure coherence ``(D_k, c_k)``.

    ``D_k = sqrt(C^2 + P_k^2)`` and ``c_k = sqrt(C^2 + V_k^2)``.
    """
    for name, value in (("C", C), ("V", V), ("P", P)):
        if not -tol <= value <= 1.0 + tol:
            raise InconsistentInputs(f"{name}={value} outside [0, 1]")
    if C * C + V * V + P * P > 1.0 + tol:
        raise InconsistentInputs(f"C^2 + V^2 + P^2 = {C * C + V * V + P * P:.12g} exceeds 1")
    D = min(1.0, math.hypot(C, P))
    c = min(1.0, math.hypot(C, V))
    return D, c


def concurrence_from_observables(c: float, V: float, D: float, P: float, tol: float = 1e-9) -> float:
    """Recover C from the erasure pair (c_k, V_k) and the which-path pair (D_k, P_k).

    Both routes must agree to within ``tol``.
    """
    slack = 1e-12
    if c < V - slack or D < P - slack:
        raise InconsistentInputs(f"need c >= V and D >= P, got c={c}, V={V}, D={D}, P={P}")
    from_erasure = math.sqrt(max(0.0, c * c - V * V))
    from_paths = math.sqrt(max(0.0, D * D - P * P))
    if abs(from_erasure - from_paths) > tol:
        raise InconsistentInputs(
            f"sqrt(c^2 - V^2) = {from_erasure:.12g} but sqrt(D^2 - P^2) = {from_paths:.12g}"
        )
    return from_erasure


def triality_residual(rho: StateLike, k: int) -> float:
    """``1 - (C^2 + V_k^2 + P_k^2)``: zero for pure states, nonnegative otherwise."""
    C = concurrence_mixed(rho)
    V, P, _ = local_quantities(rho, k)
    return 1.0 - (C * C + V * V + P * P)


@dataclass(frozen=True)
class ComplementarityReport:
    concurrence: float
    V1: float
    V2: float
    P1: float
    P2: float
    S1: float
    S2: float
    eof: float
    D1: float
    D2: float
    c1: float
    c2: float
    triality_residual_1: float
    triality_residual_2: float
    purity: float
    pure: bool
    # D_k, c_k of mixed input come from the pure-state identities, not from
    # an operational definition
    identity_defined: bool
    bell: Optional[float] = None

    def to_dict(self) -> dict:
        return {key: value for key, value in asdict(self).items() if value is not None}


def full_report(rho: StateLike) -> ComplementarityReport:
    rho = as_density(rho)
    C = concurrence_mixed(rho)
    per_k = {}
    for k in (1, 2):
        V, P, S = local_quantities(rho, k)
        D, c = derived_quantities(C, V, P)
        per_k[k] = (V, P, S, D, c, 1.0 - (C * C + V * V + P * P))
    pure = is_pure(rho)
    bell = 2.0 * math.sqrt(1.0 + C * C) if pure else None
    return ComplementarityReport(
        concurrence=C,
        V1=per_k[1][0],
        V2=per_k[2][0],
        P1=per_k[1][1],
        P2=per_k[2][1],
        S1=per_k[1][2],
        S2=per_k[2][2],
        eof=entanglement_of_formation(C),
        D1=per_k[1][3],
        D2=per_k[2][3],
        c1=per_k[1][4],
        c2=per_k[2][4],
        triality_residual_1=per_k[1][5],
        triality_residual_2=per_k[2][5],
        purity=purity(rho),
        pure=pure,
        identity_defined=not pure,
        bell=bell,
    )
