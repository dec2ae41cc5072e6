"""Circular equilibria, the projections onto them, and the linearized operator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contour import MaterialCurve, _values, nonlinear_N
from .spectral import (
    frac_laplacian,
    grid,
    hilbert,
    resample_field,
    rotate_pointwise,
    unrotate_pointwise,
    wavenumbers,
)

BASIS_NAMES = ("r", "t", "x", "y")


def basis(n: int) -> dict[str, np.ndarray]:
    """The fields ``e_r, e_t, e_x, e_y`` sampled on an ``n``-point grid."""
    s = grid(n)
    c, sn = np.cos(s), np.sin(s)
    one, zero = np.ones(n), np.zeros(n)
    return {
        "r": np.stack([c, sn]),
        "t": np.stack([-sn, c]),
        "x": np.stack([one, zero]),
        "y": np.stack([zero, one]),
    }


def inner(u, w) -> float:
    """Discrete ``<U, W> = int_T U . W ds`` (exact for trigonometric polynomials)."""
    u, w = _values(u), _values(w)
    return float(np.sum(u * w) * 2 * np.pi / u.shape[-1])


@dataclass(frozen=True)
class CircleState:
    """``Z = A e_r + B e_t + C1 e_x + C2 e_y``."""

    A: float
    B: float = 0.0
    C1: float = 0.0
    C2: float = 0.0

    @property
    def radius(self) -> float:
        return float(np.hypot(self.A, self.B))

    @property
    def is_equilibrium(self) -> bool:
        return self.radius > 0

    @property
    def center(self) -> tuple[float, float]:
        return (self.C1, self.C2)

    def coefficients(self) -> np.ndarray:
        return np.array([self.A, self.B, self.C1, self.C2])

    def render(self, n: int) -> MaterialCurve:
        e = basis(n)
        return MaterialCurve(self.A * e["r"] + self.B * e["t"] + self.C1 * e["x"] + self.C2 * e["y"])


def projection_coefficients(w) -> np.ndarray:
    w = _values(w)
    e = basis(w.shape[-1])
    return np.array([inner(w, e[k]) for k in BASIS_NAMES]) / (2 * np.pi)


def project_P(w) -> np.ndarray:
    w = _values(w)
    e = basis(w.shape[-1])
    coef = projection_coefficients(w)
    return sum(c * e[k] for c, k in zip(coef, BASIS_NAMES))


def project_Pi(w) -> np.ndarray:
    w = _values(w)
    return w - project_P(w)


def linearized_L(w) -> np.ndarray:
    """Linearization of ``Lambda X / 4 - N(X)`` at any circle, from the mode formulas.

    Componentwise ``(Lw)_1 = (Lambda w_1 + H w_2) / 4`` and
    ``(Lw)_2 = (Lambda w_2 - H w_1) / 4`` with ``H`` of multiplier ``-i sgn(n)``.
    """
    w = _values(w)
    lam = frac_laplacian(w, 1.0)
    hw = hilbert(w)
    return 0.25 * np.stack([lam[0] + hw[1], lam[1] - hw[0]])


def conjugate_multiplier(w, symbol, project: bool = True) -> np.ndarray:
    """``O_s^T m(D) O_s (Pi w)`` for a scalar multiplier ``m``.

    The pointwise rotation moves modes by one, so it is applied on a grid of
    twice the size and the result truncated back.  ``symbol`` is called with
    the nonnegative wavenumbers of the fine grid.
    """
    w = _values(w)
    n = w.shape[-1]
    if project:
        w = project_Pi(w)
    fine = resample_field(w, 2 * n)
    v = rotate_pointwise(fine)
    k = wavenumbers(2 * n)
    vh = np.fft.rfft(v, axis=-1) * np.asarray(symbol(k))
    v = np.fft.irfft(vh, n=2 * n, axis=-1)
    return resample_field(unrotate_pointwise(v), n)


def conjugated_L(w) -> np.ndarray:
    """``O_s^{-1} Lambda O_s Pi w / 4``."""
    return conjugate_multiplier(w, lambda k: 0.25 * np.abs(k))


def frak_N(curve, m: int | None = None) -> np.ndarray:
    """``N(X) + L X - Lambda X / 4``; vanishes to second order at every circle."""
    x = _values(curve)
    return nonlinear_N(x, m) + linearized_L(x) - 0.25 * frac_laplacian(x, 1.0)


def fit_circle(curve, norm=None) -> tuple[CircleState, float]:
    """Circle part ``P X`` of a curve and the size of the remainder ``Pi X``.

    ``norm`` maps a ``(2, N)`` array to a float; defaults to the sup of the
    pointwise Euclidean length.
    """
    x = _values(curve)
    a, b, c1, c2 = projection_coefficients(x)
    rest = project_Pi(x)
    if norm is None:
        residual = float(np.max(np.hypot(rest[0], rest[1])))
    else:
        residual = float(norm(rest))
    return CircleState(float(a), float(b), float(c1), float(c2)), residual
