"""CHSH evaluation, a brute-force CHSH optimizer and the concurrence Bell bound."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InconsistentInputs
from .localops import PAULI
from .measures import concurrence_pure, local_quantities
from .qstate import PureState, StateLike, as_density

_UNIT_TOL = 1e-12


def _unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float).reshape(3)
    n = np.linalg.norm(v)
    if abs(n - 1.0) > _UNIT_TOL:
        raise ValueError(f"measurement direction must be a unit vector, |v| = {n!r}")
    return v


@dataclass(frozen=True, eq=False)
class ChshSettings:
    a: np.ndarray
    a_prime: np.ndarray
    b: np.ndarray
    b_prime: np.ndarray

    def __post_init__(self):
        for name in ("a", "a_prime", "b", "b_prime"):
            object.__setattr__(self, name, _unit(getattr(self, name)))

    @classmethod
    def canonical(cls) -> "ChshSettings":
        """Optimal settings for Phi+: a=z, a'=x, b=(z+x)/sqrt2, b'=(z-x)/sqrt2."""
        z = np.array([0.0, 0.0, 1.0])
        x = np.array([1.0, 0.0, 0.0])
        r = 1.0 / math.sqrt(2.0)
        return cls(z, x, r * (z + x), r * (z - x))


def _spin(direction) -> np.ndarray:
    return np.einsum("i,iab->ab", direction, PAULI)


def correlation(rho: StateLike, a, b) -> float:
    """``Tr[rho (a.sigma x b.sigma)]``."""
    op = np.kron(_spin(_unit(a)), _spin(_unit(b)))
    value = np.trace(as_density(rho).entries @ op)
    return float(value.real)


def correlation_matrix(rho: StateLike) -> np.ndarray:
    """``T_ij = Tr[rho (sigma_i x sigma_j)]``."""
    t = as_density(rho).tensor
    return np.einsum("abcd,ica,jdb->ij", t, PAULI, PAULI).real


def chsh_value(rho: StateLike, s: ChshSettings) -> float:
    return (
        correlation(rho, s.a, s.b)
        + correlation(rho, s.a, s.b_prime)
        + correlation(rho, s.a_prime, s.b)
        - correlation(rho, s.a_prime, s.b_prime)
    )


def _normalize_rows(v: np.ndarray, fallback: np.ndarray) -> np.ndarray:
    n = np.linalg.norm(v, axis=-1, keepdims=True)
    return np.where(n > 1e-300, v / np.where(n > 0, n, 1.0), fallback)


def _chsh_from_t(t, a, ap, b, bp) -> np.ndarray:
    return np.sum(a * ((b + bp) @ t.T), axis=-1) + np.sum(ap * ((b - bp) @ t.T), axis=-1)


def _planar_search(t: np.ndarray, grid_density: int, refine_iters: int):
    """Grid over four in-plane angles, then exact coordinate-wise updates."""
    u, _, vt = np.linalg.svd(t)
    alice = u[:, :2].T  # rows span the plane of the two leading axes
    bob = vt[:2]
    angles = 2.0 * math.pi * np.arange(grid_density) / grid_density
    circle = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    A = circle @ alice
    B = circle @ bob
    m = A @ t @ B.T  # m[i, j] = a_i . T b_j
    # value[i, i', j, j'] = m[i,j] + m[i,j'] + m[i',j] - m[i',j']
    value = (
        m[:, None, :, None]
        + m[:, None, None, :]
        + m[None, :, :, None]
        - m[None, :, None, :]
    )
    i, ip, j, jp = np.unravel_index(np.argmax(value), value.shape)
    theta = np.array([angles[i], angles[ip], angles[j], angles[jp]])

    def direction(plane, angle):
        return math.cos(angle) * plane[0] + math.sin(angle) * plane[1]

    for _ in range(refine_iters):
        a, ap, b, bp = (
            direction(alice, theta[0]),
            direction(alice, theta[1]),
            direction(bob, theta[2]),
            direction(bob, theta[3]),
        )
        # chsh is linear in each direction: maximize c.w over the plane exactly
        w = t @ (b + bp)
        theta[0] = math.atan2(alice[1] @ w, alice[0] @ w)
        a = direction(alice, theta[0])
        w = t @ (b - bp)
        theta[1] = math.atan2(alice[1] @ w, alice[0] @ w)
        ap = direction(alice, theta[1])
        w = t.T @ (a + ap)
        theta[2] = math.atan2(bob[1] @ w, bob[0] @ w)
        w = t.T @ (a - ap)
        theta[3] = math.atan2(bob[1] @ w, bob[0] @ w)

    a, ap, b, bp = (
        direction(alice, theta[0]),
        direction(alice, theta[1]),
        direction(bob, theta[2]),
        direction(bob, theta[3]),
    )
    return float(_chsh_from_t(t, a, ap, b, bp)), (a, ap, b, bp)


def _sphere_points(n: int) -> np.ndarray:
    """Deterministic coarse cover of the unit sphere (polar x azimuth grid)."""
    polar = (np.arange(n) + 0.5) * math.pi / n
    azim = 2.0 * math.pi * np.arange(n) / n
    p, q = np.meshgrid(polar, azim, indexing="ij")
    pts = np.stack([np.sin(p) * np.cos(q), np.sin(p) * np.sin(q), np.cos(p)], axis=-1)
    return pts.reshape(-1, 3)


def _sphere_search(t: np.ndarray, coarse: int, refine_iters: int):
    """Alternating exact maximization from a coarse full-sphere set of starts."""
    pts = _sphere_points(coarse)
    b = np.repeat(pts, len(pts), axis=0)
    bp = np.tile(pts, (len(pts), 1))
    a = _normalize_rows((b + bp) @ t.T, b)
    ap = _normalize_rows((b - bp) @ t.T, bp)
    previous = -np.inf
    for _ in range(refine_iters):
        b = _normalize_rows((a + ap) @ t, b)
        bp = _normalize_rows((a - ap) @ t, bp)
        a = _normalize_rows((b + bp) @ t.T, a)
        ap = _normalize_rows((b - bp) @ t.T, ap)
        current = float(np.max(_chsh_from_t(t, a, ap, b, bp)))
        if current - previous <= 1e-15:
            break
        previous = current
    values = _chsh_from_t(t, a, ap, b, bp)
    best = int(np.argmax(values))
    return float(values[best]), (a[best], ap[best], b[best], bp[best])


def chsh_maximize(
    rho: StateLike,
    grid_density: int = 12,
    refine_iters: int = 50,
    return_settings: bool = False,
):
    """Maximal CHSH value of ``rho`` found by direct search.

    A grid of ``grid_density`` points per angle is laid over the four in-plane
    angles (each direction restricted to the plane of the two leading
    correlation axes of its party) and refined by exact coordinate updates.
    An independent search over the full sphere, started from a coarse grid
    of direction pairs, confirms the result; the larger value is returned.

    Deterministic for fixed arguments.
    """
    t = correlation_matrix(rho)
    best = _planar_search(t, grid_density, refine_iters)
    coarse = max(2, grid_density // 3)
    full = _sphere_search(t, coarse, refine_iters)
    value, dirs = max(best, full, key=lambda item: item[0])
    if return_settings:
        return value, ChshSettings(*[d / np.linalg.norm(d) for d in dirs])
    return value


def bell_bound_pure(state: PureState, tol: float = 1e-10) -> float:
    """``2 sqrt(1 + C^2)``, cross-checked against ``2 sqrt(2 - S_k^2)`` for both k."""
    C = concurrence_pure(state)
    bound = 2.0 * math.sqrt(1.0 + C * C)
    for k in (1, 2):
        _, _, S = local_quantities(state, k)
        via_local = 2.0 * math.sqrt(max(0.0, 2.0 - S * S))
        if abs(via_local - bound) > tol:
            raise InconsistentInputs(
                f"2 sqrt(1 + C^2) = {bound:.12g} but 2 sqrt(2 - S_{k}^2) = {via_local:.12g}"
            )
    return bound
