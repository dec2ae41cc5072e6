"""Finite-difference contour quantities and the interface velocity.

The velocity of the filament is evaluated in two independent ways:

* :func:`direct_velocity` integrates ``-d_alpha G(delta_alpha X) delta_alpha X'``
  over the torus, straight from the Stokeslet;
* :func:`nonlinear_N` evaluates the remainder ``N(X)`` of the semilinear form
  ``X_t + Lambda X / 4 = N(X)`` as a sum of kernels
  ``H(x) = x_a x_b x_c / |x|^4``.

Both use the trapezoid rule on the midpoint-shifted nodes
``alpha_k = -pi + (2k+1) pi / M``, which never touches the removable
singularity at ``alpha = 0``.  Off-grid values ``X(s - alpha)`` come from the
trigonometric interpolant.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import DegeneracyError
from .spectral import PeriodicField, derivative, grid, shift

CHORD_RATIO_FLOOR = 1e-6


class MaterialCurve(PeriodicField):
    """A closed curve ``X(s)`` sampled at the grid nodes, shape ``(2, N)``."""

    def __post_init__(self):
        super().__post_init__()
        if self.values.ndim != 2:
            raise ValueError("a material curve is a (2, N) vector field")

    @property
    def tangent(self) -> np.ndarray:
        return derivative(self.values)

    def translated(self, c) -> "MaterialCurve":
        return MaterialCurve(self.values + np.asarray(c, dtype=float)[:, None])

    def rotated(self, angle: float) -> "MaterialCurve":
        c, s = np.cos(angle), np.sin(angle)
        return MaterialCurve(np.array([[c, -s], [s, c]]) @ self.values)

    def scaled(self, lam: float) -> "MaterialCurve":
        return MaterialCurve(lam * self.values)


def _values(curve) -> np.ndarray:
    if isinstance(curve, PeriodicField):
        return curve.values
    return np.asarray(curve, dtype=float)


def alpha_nodes(m: int) -> np.ndarray:
    if m < 2 or m % 2:
        raise ValueError(f"quadrature size must be even and >= 2, got {m}")
    return -np.pi + (2 * np.arange(m) + 1) * np.pi / m


def alpha_tilde(alpha):
    """``(cot(alpha/2)/2)^{-1} = 2 tan(alpha/2)``."""
    return 2.0 * np.tan(np.asarray(alpha, dtype=float) / 2)


def _half_cot(alpha: float) -> float:
    a = np.remainder(alpha + np.pi, 2 * np.pi) - np.pi
    if a == 0:
        raise ValueError("alpha = 0 (mod 2 pi) is the singular point")
    if abs(abs(a) - np.pi) < 1e-15:
        return 0.0
    return 0.5 / np.tan(a / 2)


def delta_alpha(curve, alpha: float) -> np.ndarray:
    """``X(s) - X(s - alpha)``."""
    x = _values(curve)
    return x - shift(x, alpha)[0]


def slope(curve, alpha: float) -> np.ndarray:
    """``delta_alpha X / alpha`` for ``alpha`` in ``(-pi, pi]``, ``alpha != 0``."""
    if alpha == 0:
        raise ValueError("alpha = 0 is the singular point")
    return delta_alpha(curve, alpha) / alpha


def slope_tilde(curve, alpha: float) -> np.ndarray:
    """``delta_alpha X / alpha_tilde``; identically zero at ``alpha = pi``."""
    return delta_alpha(curve, alpha) * _half_cot(alpha)


def e_alpha(curve, alpha: float) -> np.ndarray:
    """``X'(s - alpha) - slope_tilde(X, alpha)``."""
    x = _values(curve)
    hc = _half_cot(alpha)
    tangent_back = shift(derivative(x), alpha)[0]
    return tangent_back - delta_alpha(x, alpha) * hc


class IndexTriple(NamedTuple):
    """One summand ``coef * H_{abc}(slope~) * E_i * (delta X')_j`` of ``N(X)_out``.

    Indices are 1-based, as in the component labels ``X_1, X_2``.
    """

    coef: float
    triple: tuple[int, int, int]
    i: int
    j: int
    out: int


def _build_terms() -> tuple[IndexTriple, ...]:
    a = 1.0 / (4 * np.pi)
    b = 1.0 / (2 * np.pi)
    terms = []
    for c in (1, 2):
        # (slope~ . E) / |slope~|^2 * delta X'_c ;  x_k / |x|^2 = sum_m H_{kmm}
        for k in (1, 2):
            for m in (1, 2):
                terms.append(IndexTriple(a, (k, m, m), k, c, c))
        # -(E (x) slope~ + slope~ (x) E) / |slope~|^2 . delta X'
        for j in (1, 2):
            for m in (1, 2):
                terms.append(IndexTriple(-a, (j, m, m), c, j, c))
                terms.append(IndexTriple(-a, (c, m, m), j, j, c))
        # 2 (slope~ (x) slope~)(slope~ . E) / |slope~|^4 . delta X'
        for j in (1, 2):
            for k in (1, 2):
                terms.append(IndexTriple(b, (c, j, k), k, j, c))
    return tuple(terms)


NONLINEAR_TERMS = _build_terms()


def kernel_H(x, triple) -> np.ndarray:
    """``x_{i1} x_{i2} x_{i3} / |x|^4`` for ``x`` of shape ``(2, ...)``."""
    x = np.asarray(x, dtype=float)
    r2 = x[0] ** 2 + x[1] ** 2
    if np.any(r2 == 0):
        raise ValueError("H is singular at x = 0")
    i1, i2, i3 = (i - 1 for i in triple)
    return x[i1] * x[i2] * x[i3] / r2**2


def grad_H(x, triple) -> np.ndarray:
    """Analytic gradient of :func:`kernel_H`, shape ``(2, ...)``."""
    x = np.asarray(x, dtype=float)
    r2 = x[0] ** 2 + x[1] ** 2
    if np.any(r2 == 0):
        raise ValueError("H is singular at x = 0")
    idx = [i - 1 for i in triple]
    num = x[idx[0]] * x[idx[1]] * x[idx[2]]
    out = []
    for m in (0, 1):
        dnum = np.zeros_like(r2)
        for p in range(3):
            if idx[p] == m:
                rest = [idx[q] for q in range(3) if q != p]
                dnum = dnum + x[rest[0]] * x[rest[1]]
        out.append(dnum / r2**2 - 4 * x[m] * num / r2**3)
    return np.stack(out)


def d_H(a1, a2, triple) -> np.ndarray:
    """First-order Taylor remainder ``H(A1) - H(A2) - (A1 - A2) . grad H(A2)``."""
    a1 = np.asarray(a1, dtype=float)
    a2 = np.asarray(a2, dtype=float)
    g = grad_H(a2, triple)
    return kernel_H(a1, triple) - kernel_H(a2, triple) - np.sum((a1 - a2) * g, axis=0)


class _Samples(NamedTuple):
    alpha: np.ndarray  # (M,)
    chord: np.ndarray  # delta_alpha X, (M, 2, N)
    tangent_back: np.ndarray  # X'(s - alpha), (M, 2, N)
    dtangent: np.ndarray  # delta_alpha X', (M, 2, N)


@lru_cache(maxsize=16)
def _shift_phase(n: int, m: int) -> np.ndarray:
    return np.exp(-1j * np.outer(alpha_nodes(m), np.arange(n // 2 + 1)))


def _check_chords(x: np.ndarray, alpha: np.ndarray, chord_len: np.ndarray) -> None:
    """Raise :class:`DegeneracyError` if ``|X(s) - X(s - alpha)| / |alpha|`` drops below the floor."""
    ratio = chord_len / np.abs(alpha)[:, None]
    k, j = np.unravel_index(np.argmin(ratio), ratio.shape)
    if not ratio[k, j] >= CHORD_RATIO_FLOOR:
        s = grid(x.shape[-1])[j]
        pair = (float(s), float(np.remainder(s - alpha[k], 2 * np.pi)))
        raise DegeneracyError(
            f"chord ratio {ratio[k, j]:.3e} below {CHORD_RATIO_FLOOR:g} at s pair {pair}",
            pair=pair,
            state=x.copy(),
        )


def _samples(x: np.ndarray, m: int | None, check: bool = True) -> _Samples:
    n = x.shape[-1]
    m = 2 * n if m is None else m
    alpha = alpha_nodes(m)
    xp = derivative(x)
    fh = np.fft.rfft(np.concatenate([x, xp]), axis=-1)
    both = np.fft.irfft(fh[None] * _shift_phase(n, m)[:, None, :], n=n, axis=-1)
    xs, xps = both[:, :2], both[:, 2:]
    chord = x[None] - xs
    if check:
        _check_chords(x, alpha, np.hypot(chord[:, 0], chord[:, 1]))
        # the quadrature nodes miss grid offsets, so node pairs are checked as well
        p = np.arange(1, n // 2 + 1)
        node_chords = x[:, (np.arange(n)[None] - p[:, None]) % n] - x[:, None, :]
        _check_chords(x, 2 * np.pi * p / n, np.hypot(node_chords[0], node_chords[1]))
    return _Samples(alpha, chord, xps, xp[None] - xps)


# H_{abc} depends only on how many indices equal 2: monomials x1^3, x1^2 x2, x1 x2^2, x2^3
def _monomial(triple) -> int:
    return sum(i == 2 for i in triple)


def _contraction_table(terms) -> np.ndarray:
    """``C[out, monomial, i, j]`` such that ``N_out = sum C H_mono E_i (delta X')_j``."""
    table = np.zeros((2, 4, 2, 2))
    for t in terms:
        table[t.out - 1, _monomial(t.triple), t.i - 1, t.j - 1] += t.coef
    return table


_CONTRACTION = _contraction_table(NONLINEAR_TERMS)


def _H_monomials(chord: np.ndarray) -> np.ndarray:
    x1 = np.ascontiguousarray(chord[:, 0])
    x2 = np.ascontiguousarray(chord[:, 1])
    r2 = x1 * x1 + x2 * x2
    inv = 1.0 / (r2 * r2)
    x11, x22 = x1 * x1 * inv, x2 * x2 * inv
    return np.stack([x11 * x1, x11 * x2, x22 * x1, x22 * x2])


def _e_field(smp: _Samples) -> np.ndarray:
    hc = 0.5 / np.tan(smp.alpha / 2)
    return smp.tangent_back - smp.chord * hc[:, None, None]


def nonlinear_N(curve, m: int | None = None) -> np.ndarray:
    """Remainder ``N(X)`` of the semilinear form, shape ``(2, N)``.

    Uses ``H(slope~) * cot(alpha/2)/2 = H(delta_alpha X)`` (H is homogeneous
    of degree -1), which keeps the integrand regular at ``alpha = pi`` where
    the tilde slope vanishes.
    """
    x = _values(curve)
    smp = _samples(x, m)
    e = _e_field(smp)
    h = _H_monomials(smp.chord)  # (4, M, N)
    w = smp.dtangent
    ew = {(i, j): e[:, i] * w[:, j] for i in range(2) for j in range(2)}
    acc = np.zeros((2,) + w.shape[:1] + w.shape[2:])
    for o in range(2):
        for a in range(4):
            weight = sum(c * ew[i, j] for (i, j), c in np.ndenumerate(_CONTRACTION[o, a]) if c)
            acc[o] += weight * h[a]
    return acc.sum(axis=1) * (2 * np.pi / len(smp.alpha))


def direct_velocity(curve, m: int | None = None) -> np.ndarray:
    """``-int_T d_alpha G(delta_alpha X(s)) delta_alpha X'(s) d alpha``."""
    x = _values(curve)
    smp = _samples(x, m)
    d, v, w = smp.chord, smp.tangent_back, smp.dtangent
    r2 = d[:, 0] ** 2 + d[:, 1] ** 2
    dv = np.sum(d * v, axis=1) / r2
    dw = np.sum(d * w, axis=1) / r2
    vw = np.sum(v * w, axis=1) / r2
    integrand = (
        dv[:, None] * w - (v * dw[:, None] + d * vw[:, None]) + 2 * d * (dw * dv)[:, None]
    ) / (4 * np.pi)
    return integrand.sum(axis=0) * (2 * np.pi / len(smp.alpha))


def integral0_matrix(curve, m: int | None = None) -> np.ndarray:
    """``sum int H(slope~) E_i d alpha / alpha`` arranged as a ``(2, 2, N)`` matrix.

    Entry ``[out, j]`` collects the summands of :data:`NONLINEAR_TERMS` that
    multiply ``(delta X')_j`` in component ``out``.
    """
    x = _values(curve)
    smp = _samples(x, m)
    e = _e_field(smp)
    h = _H_monomials(smp.chord)
    acc = np.einsum("oaij,amn,min->ojn", _CONTRACTION, h, e, optimize=True)
    return acc * (2 * np.pi / len(smp.alpha))


def check_integral0(curve, m: int | None = None) -> float:
    """Largest entry of :func:`integral0_matrix`; zero up to quadrature error."""
    return float(np.max(np.abs(integral0_matrix(curve, m))))
