"""Periodic grid fields and Fourier-multiplier operators on [0, 2*pi).

Every field lives on the uniform grid ``s_j = 2*pi*j/N``.  Arrays carry the
grid along their last axis, so a scalar field has shape ``(N,)`` and a planar
vector field has shape ``(2, N)``.  Multipliers act through ``rfft``; odd
symbols (Hilbert transform, derivative) zero the unpaired Nyquist mode so that
real fields stay real.

The Fourier convention is ``f(s) = sum_n fhat_n exp(i n s)``, so
``fhat = fft(values) / N``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.signal import resample

from .errors import ConfigError

__all__ = [
    "PeriodicField",
    "MultiplierOp",
    "grid",
    "check_grid_size",
    "dft",
    "idft",
    "wavenumbers",
    "apply_symbol",
    "derivative",
    "hilbert",
    "frac_laplacian",
    "semigroup",
    "phi1_symbol",
    "phi2_symbol",
    "kernel_K",
    "bump",
    "mollifier_symbol",
    "mollify",
    "rotate_pointwise",
    "unrotate_pointwise",
    "shift",
    "resample_field",
    "HILBERT",
    "LAMBDA",
    "DERIVATIVE",
]


def check_grid_size(n: int) -> int:
    if int(n) != n or n < 4 or n % 2:
        raise ConfigError(f"grid size must be an even integer >= 4, got {n!r}")
    return int(n)


def grid(n: int) -> np.ndarray:
    n = check_grid_size(n)
    return 2 * np.pi * np.arange(n) / n


def wavenumbers(n: int) -> np.ndarray:
    """Nonnegative wavenumbers matching ``np.fft.rfft`` output of length ``n``."""
    return np.arange(n // 2 + 1)


def dft(values: np.ndarray) -> np.ndarray:
    """Full normalized spectrum in numpy FFT order (``fhat_n`` at index ``n mod N``)."""
    values = np.asarray(values, dtype=float)
    check_grid_size(values.shape[-1])
    return np.fft.fft(values, axis=-1) / values.shape[-1]


def idft(spectrum: np.ndarray) -> np.ndarray:
    spectrum = np.asarray(spectrum)
    n = check_grid_size(spectrum.shape[-1])
    return np.fft.ifft(spectrum * n, axis=-1).real


def apply_symbol(values: np.ndarray, symbol: np.ndarray, odd: bool = False) -> np.ndarray:
    """Apply a multiplier given by its samples on the nonnegative wavenumbers."""
    values = np.asarray(values, dtype=float)
    n = values.shape[-1]
    fh = np.fft.rfft(values, axis=-1) * symbol
    if odd:
        fh[..., -1] = 0.0
    return np.fft.irfft(fh, n=n, axis=-1)


@dataclass(frozen=True)
class MultiplierOp:
    """A Fourier multiplier ``f -> sum_n m(n) fhat_n e^{ins}``.

    ``symbol`` is evaluated on nonnegative integer wavenumbers; the values on
    negative wavenumbers are implied by ``m(-n) = conj(m(n))`` (real fields map
    to real fields).  ``odd`` marks symbols with no real Nyquist value.
    """

    symbol: Callable[[np.ndarray], np.ndarray]
    name: str = "multiplier"
    odd: bool = False

    def samples(self, n: int) -> np.ndarray:
        return np.asarray(self.symbol(wavenumbers(n)), dtype=complex)

    def __call__(self, values):
        if isinstance(values, PeriodicField):
            return PeriodicField(self(values.values))
        values = np.asarray(values, dtype=float)
        return apply_symbol(values, self.samples(values.shape[-1]), odd=self.odd)

    def compose(self, other: "MultiplierOp") -> "MultiplierOp":
        a, b = self.symbol, other.symbol
        return MultiplierOp(
            lambda k: np.asarray(a(k)) * np.asarray(b(k)),
            name=f"{self.name}*{other.name}",
            odd=self.odd or other.odd,
        )

    __matmul__ = compose


def _sgn_symbol(k):
    return -1j * np.sign(k)


HILBERT = MultiplierOp(_sgn_symbol, name="hilbert", odd=True)
LAMBDA = MultiplierOp(lambda k: np.abs(k).astype(float), name="Lambda")
DERIVATIVE = MultiplierOp(lambda k: 1j * k, name="d/ds", odd=True)


def derivative(values: np.ndarray, order: int = 1) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    k = wavenumbers(values.shape[-1])
    return apply_symbol(values, (1j * k) ** order, odd=order % 2 == 1)


def hilbert(values: np.ndarray) -> np.ndarray:
    """Periodic Hilbert transform, multiplier ``-i sgn(n)``; ``cos(ns) -> sin(ns)``."""
    return HILBERT(values)


def frac_laplacian(values: np.ndarray, sigma: float) -> np.ndarray:
    """``Lambda^sigma``, multiplier ``|n|^sigma`` (mode 0 maps to 0 for sigma > 0)."""
    if not np.isfinite(sigma):
        raise ValueError("sigma must be finite")
    values = np.asarray(values, dtype=float)
    # 0.0**0.0 == 1, so sigma = 0 is the identity
    k = wavenumbers(values.shape[-1]).astype(float)
    return apply_symbol(values, k**sigma)


def semigroup(values: np.ndarray, t: float) -> np.ndarray:
    """``exp(-t Lambda / 4)``; the solution operator of ``f_t + Lambda f / 4 = 0``."""
    if t < 0:
        raise ValueError(f"semigroup time must be nonnegative, got {t}")
    values = np.asarray(values, dtype=float)
    k = wavenumbers(values.shape[-1])
    return apply_symbol(values, np.exp(-0.25 * t * k))


def phi1_symbol(k: np.ndarray, dt: float, rate: float = 0.25) -> np.ndarray:
    """``int_0^dt exp(-rate |k| tau) dtau`` evaluated mode-wise."""
    x = rate * np.abs(np.asarray(k, dtype=float)) * dt
    out = np.full_like(x, dt)
    nz = x > 0
    out[nz] = -np.expm1(-x[nz]) / x[nz] * dt
    return out


def phi2_symbol(k: np.ndarray, dt: float, rate: float = 0.25) -> np.ndarray:
    """``(exp(-x) - 1 + x) / x**2 * dt`` with ``x = rate |k| dt``; the ETD2 corrector weight."""
    x = rate * np.abs(np.asarray(k, dtype=float)) * dt
    out = np.empty_like(x)
    small = x < 1e-2
    xs = x[small]
    out[small] = dt * (0.5 - xs / 6 + xs**2 / 24 - xs**3 / 120 + xs**4 / 720)
    xl = x[~small]
    out[~small] = dt * (np.expm1(-xl) + xl) / xl**2
    return out


def kernel_K(t: float, x):
    """Line kernel of ``exp(-t |xi| / 4)`` in the cycles-per-unit Fourier convention.

    ``K(t, x) = 8 t / (t**2 + 64 pi**2 x**2)``.  With the angular wavenumbers
    used on the grid the periodic semigroup at time ``t`` is convolution with
    ``K(2 pi t, .)``.
    """
    if not t > 0:
        raise ValueError(f"kernel time must be positive, got {t}")
    x = np.asarray(x, dtype=float)
    return 8.0 * t / (t * t + 64.0 * np.pi**2 * x * x)


def bump(x):
    """Unnormalized smooth bump ``exp(-1/(1-x^2))`` supported on (-1, 1)."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    inside = np.abs(x) < 1
    out[inside] = np.exp(-1.0 / (1.0 - x[inside] ** 2))
    return out


_BUMP_NODES = 4001


def _bump_moments():
    y = np.linspace(-1.0, 1.0, _BUMP_NODES)
    w = bump(y)
    return y, w / np.trapezoid(w, y)


def mollifier_symbol(k: np.ndarray, eta: float) -> np.ndarray:
    """Fourier samples ``int rho_eta(x) e^{-ikx} dx`` of the standard mollifier."""
    y, w = _bump_moments()
    k = np.asarray(k, dtype=float)
    # trapezoid on the support is spectrally accurate: the bump is flat to all orders at +-1
    return np.trapezoid(w[None, :] * np.cos(np.outer(k * eta, y)), y, axis=-1)


def mollify(values: np.ndarray, eta: float) -> np.ndarray:
    """Periodic convolution with ``rho_eta = rho(x/eta)/eta``."""
    if not eta > 0:
        raise ValueError(f"mollifier width must be positive, got {eta}")
    if eta >= np.pi:
        raise ValueError(f"mollifier width {eta} exceeds the half period")
    values = np.asarray(values, dtype=float)
    k = wavenumbers(values.shape[-1])
    return apply_symbol(values, mollifier_symbol(k, eta))


def rotate_pointwise(w: np.ndarray, s: np.ndarray | None = None) -> np.ndarray:
    """Apply ``O_s = [[cos s, sin s], [-sin s, cos s]]`` at each node."""
    w = np.asarray(w, dtype=float)
    if w.shape[0] != 2:
        raise ValueError("rotate_pointwise expects a (2, N) vector field")
    if s is None:
        s = grid(w.shape[-1])
    c, sn = np.cos(s), np.sin(s)
    return np.stack([c * w[0] + sn * w[1], -sn * w[0] + c * w[1]])


def unrotate_pointwise(w: np.ndarray, s: np.ndarray | None = None) -> np.ndarray:
    """Apply ``O_s^T``, the inverse of :func:`rotate_pointwise`."""
    w = np.asarray(w, dtype=float)
    if s is None:
        s = grid(w.shape[-1])
    c, sn = np.cos(s), np.sin(s)
    return np.stack([c * w[0] - sn * w[1], sn * w[0] + c * w[1]])


def shift(values: np.ndarray, alphas) -> np.ndarray:
    """Trigonometric interpolant evaluated at ``s_j - alpha`` for each alpha.

    Returns shape ``(len(alphas),) + values.shape``.  The Nyquist term is
    interpolated as ``cos(N s / 2)``, which is what a grid-sampled real field
    carries.
    """
    values = np.asarray(values, dtype=float)
    n = values.shape[-1]
    alphas = np.atleast_1d(np.asarray(alphas, dtype=float))
    fh = np.fft.rfft(values, axis=-1)
    k = wavenumbers(n)
    phase = np.exp(-1j * np.outer(alphas, k))
    phase = phase.reshape((len(alphas),) + (1,) * (values.ndim - 1) + (len(k),))
    return np.fft.irfft(fh[None, ...] * phase, n=n, axis=-1)


def resample_field(values: np.ndarray, n_new: int) -> np.ndarray:
    """Fourier interpolation or truncation onto a grid of ``n_new`` nodes."""
    values = np.asarray(values, dtype=float)
    if values.shape[-1] == n_new:
        return values.copy()
    return resample(values, n_new, axis=-1)


@dataclass
class PeriodicField:
    """Samples of a scalar or planar field on the uniform periodic grid.

    The spectrum is computed on first access and dropped whenever ``values``
    is reassigned.
    """

    values: np.ndarray
    _spectrum: np.ndarray | None = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        self.values = np.array(self.values, dtype=float)
        check_grid_size(self.values.shape[-1])
        if self.values.ndim not in (1, 2) or (self.values.ndim == 2 and self.values.shape[0] != 2):
            raise ValueError(f"expected shape (N,) or (2, N), got {self.values.shape}")

    def __setattr__(self, name, value):
        if name == "values":
            object.__setattr__(self, "_spectrum", None)
        object.__setattr__(self, name, value)

    @classmethod
    def from_function(cls, func, n: int) -> "PeriodicField":
        return cls(np.asarray(func(grid(n)), dtype=float))

    @property
    def grid_size(self) -> int:
        return self.values.shape[-1]

    @property
    def is_vector(self) -> bool:
        return self.values.ndim == 2

    @property
    def s(self) -> np.ndarray:
        return grid(self.grid_size)

    @property
    def spectrum(self) -> np.ndarray:
        if self._spectrum is None:
            object.__setattr__(self, "_spectrum", dft(self.values))
        return self._spectrum

    def apply(self, op: MultiplierOp) -> "PeriodicField":
        return PeriodicField(op(self.values))

    def derivative(self, order: int = 1) -> "PeriodicField":
        return PeriodicField(derivative(self.values, order))

    def __add__(self, other):
        other = other.values if isinstance(other, PeriodicField) else other
        return PeriodicField(self.values + other)

    def __sub__(self, other):
        other = other.values if isinstance(other, PeriodicField) else other
        return PeriodicField(self.values - other)

    def __mul__(self, scalar):
        return PeriodicField(self.values * scalar)

    __rmul__ = __mul__

    def __neg__(self):
        return PeriodicField(-self.values)
