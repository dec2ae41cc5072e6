"""Measured quantities: well-stretching, Hoelder and Besov norms, sampled
space-time norms, decay rates and the kappa-propagation monitor.

Every sup here is a discrete sup over sampled parameters, hence a lower bound
on the continuum quantity.  Differences ``h(s) - h(s - alpha)`` are taken at
grid offsets ``alpha = 2 pi p / N``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np

from .contour import _values
from .spectral import apply_symbol, derivative, frac_laplacian, mollify, wavenumbers

THETA_EFF = 0.9


def _pointwise(h: np.ndarray) -> np.ndarray:
    """Euclidean length for vector fields, absolute value for scalars."""
    if h.ndim >= 2 and h.shape[-2] == 2:
        return np.hypot(h[..., 0, :], h[..., 1, :])
    return np.abs(h)


def sup_norm(h) -> float:
    return float(np.max(_pointwise(_values(h))))


def _offset_alphas(n: int, include_pi: bool = True) -> tuple[np.ndarray, np.ndarray]:
    last = n // 2 if include_pi else n // 2 - 1
    p = np.arange(1, last + 1)
    return p, 2 * np.pi * p / n


def kappa(curve) -> float:
    """``sup |s1 - s2|_T / |X(s1) - X(s2)|`` over distinct node pairs.

    Returns ``inf`` when two distinct nodes coincide.
    """
    x = _values(curve)
    n = x.shape[-1]
    best = 0.0
    for p, a in zip(*_offset_alphas(n)):
        chord = np.hypot(*(x - np.roll(x, p, axis=-1)))
        cmin = chord.min()
        if cmin == 0:
            return float("inf")
        best = max(best, a / cmin)
    return float(best)


def kappa_mollified(curve, etas) -> tuple[np.ndarray, np.ndarray]:
    """``kappa(X * rho_eta)`` along a decreasing ``eta`` sequence and its running minimum."""
    x = _values(curve)
    vals = np.array([kappa(mollify(x, eta)) for eta in etas])
    return vals, np.minimum.accumulate(vals)


def q_slice(x0, xt, t: float, eps_prime: float) -> float:
    """``sup_{alpha, s} (|alpha|/t)^eps' | 1/|slope_alpha X(t)| - 1/|slope_alpha X(0)| |``."""
    x0, xt = _values(x0), _values(xt)
    n = x0.shape[-1]
    best = 0.0
    for p, a in zip(*_offset_alphas(n, include_pi=False)):
        c0 = np.hypot(*(x0 - np.roll(x0, p, axis=-1)))
        c1 = np.hypot(*(xt - np.roll(xt, p, axis=-1)))
        val = (a / t) ** eps_prime * np.max(np.abs(a / c1 - a / c0))
        best = max(best, float(val))
    return best


def q_quantity(traj, eps_prime: float) -> float:
    """Discrete ``Q(T)`` over the stored states of a trajectory."""
    times, states = np.asarray(traj.times), traj.states
    x0 = states[0]
    q = 0.0
    for t, x in zip(times[1:], states[1:]):
        q = max(q, q_slice(x0, x, t - times[0], eps_prime))
    return q


def holder_norm(h, gamma: float, k: int = 0) -> float:
    """``sup |h^(k)(s) - h^(k)(s')| / |s - s'|_T^gamma`` over node pairs."""
    h = _values(h)
    if k:
        h = derivative(h, k)
    n = h.shape[-1]
    best = 0.0
    for p, a in zip(*_offset_alphas(n)):
        diff = _pointwise(h - np.roll(h, p, axis=-1))
        best = max(best, float(diff.max()) / a**gamma)
    return best


def default_t_grid(n: int, count: int = 64) -> np.ndarray:
    return np.logspace(np.log10(1.0 / n), 1.0, count)


def besov_b0(h, t_grid=None) -> float:
    """Heat-type characterization ``sup_t t ||Lambda e^{-t Lambda/4} h||_inf``."""
    h = _values(h)
    n = h.shape[-1]
    if t_grid is None:
        t_grid = default_t_grid(n)
    k = wavenumbers(n)
    best = 0.0
    for t in t_grid:
        g = apply_symbol(h, t * k * np.exp(-0.25 * t * k))
        best = max(best, float(np.max(_pointwise(g))))
    return best


def besov_b1(h, t_grid=None) -> float:
    return besov_b0(derivative(_values(h)), t_grid)


@dataclass
class NormReport:
    name: str
    value: float
    params: dict = field(default_factory=dict)
    lower_bound: bool = True

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, default=float)


def default_mu_b_lattice(eps_prime: float, size: int = 8, theta: float = THETA_EFF):
    """``(mu, b)`` pairs with ``0 <= mu <= 2/3`` and ``2 eps' <= b <= theta - mu - eps'``."""
    pairs = []
    for mu in np.linspace(0.0, 2.0 / 3.0, size):
        for b in np.linspace(2 * eps_prime, theta - mu - eps_prime, size):
            pairs.append((float(mu), float(b)))
    return pairs


def _lp_time(times: np.ndarray, f: np.ndarray, p: float) -> np.ndarray:
    """``(int f^p dt)^{1/p}`` along axis 0 by the trapezoid rule, overflow-safe."""
    scale = np.max(f, axis=0)
    safe = np.where(scale > 0, scale, 1.0)
    integral = np.trapezoid((f / safe) ** p, times, axis=0)
    return scale * integral ** (1.0 / p)


def g_norm_sampled(times, fields, eps_prime: float = 0.01, pairs=None, alpha_offsets=None) -> NormReport:
    """Sampled ``sup_{mu,b,alpha} ||t^mu delta_alpha Lambda^{b-eps'} h||_{L^{1/b}_T L^inf} / |alpha|^{mu+eps'}``.

    ``fields`` has time along axis 0.  ``alpha_offsets`` are grid offsets
    ``p`` (``alpha = 2 pi p / N``); ``-alpha`` gives the same sup over ``s``.
    """
    times = np.asarray(times, dtype=float)
    fields = np.asarray(fields, dtype=float)
    n = fields.shape[-1]
    if pairs is None:
        pairs = default_mu_b_lattice(eps_prime)
    if alpha_offsets is None:
        alpha_offsets = np.arange(1, n // 2 + 1)
    pairs = list(pairs)
    alpha_offsets = np.asarray(alpha_offsets)
    if not pairs or alpha_offsets.size == 0 or times.size < 2:
        raise ValueError("g-norm needs nonempty (mu, b) and alpha grids and at least two times")
    alphas = 2 * np.pi * alpha_offsets / n
    best, arg = 0.0, None
    cache = {}
    for mu, b in pairs:
        if b not in cache:
            g = frac_laplacian(fields, b - eps_prime)
            cache[b] = np.stack(
                [np.max(_pointwise(g - np.roll(g, p, axis=-1)), axis=-1) for p in alpha_offsets], axis=-1
            )  # (T, n_alpha)
        sup_s = cache[b]
        weighted = sup_s * (times**mu)[:, None]
        vals = _lp_time(times, weighted, 1.0 / b) / alphas ** (mu + eps_prime)
        i = int(np.argmax(vals))
        if vals[i] > best:
            best, arg = float(vals[i]), (mu, b, float(alphas[i]))
    return NormReport(
        "G_T",
        best,
        {
            "argmax_mu_b_alpha": arg,
            "eps_prime": eps_prime,
            "n_pairs": len(pairs),
            "n_alpha": int(alpha_offsets.size),
            "t_range": [float(times[0]), float(times[-1])],
            "n_times": int(times.size),
        },
    )


def g_tilde_norm(h0, t_final: float, n_times: int = 201, eps_prime: float = 0.01, **kw) -> NormReport:
    """``G~_T`` norm of initial data: the sampled ``G_T`` norm of its free evolution."""
    h0 = _values(h0)
    times = np.linspace(0.0, t_final, n_times)
    k = wavenumbers(h0.shape[-1])
    fh = np.fft.rfft(h0, axis=-1)
    fields = np.stack([np.fft.irfft(fh * np.exp(-0.25 * t * k), n=h0.shape[-1], axis=-1) for t in times])
    rep = g_norm_sampled(times, fields, eps_prime, **kw)
    rep.name = "G~_T"
    return rep


def mixed_norm(times, fields, p: float, spatial_norm=sup_norm) -> float:
    """``|| ||h(t)||_space ||_{L^p(0, T)}`` with trapezoidal time quadrature."""
    times = np.asarray(times, dtype=float)
    per_t = np.array([spatial_norm(f) for f in fields])
    if np.isinf(p):
        return float(per_t.max())
    if p < 1:
        raise ValueError("p must be >= 1")
    return float(np.trapezoid(per_t**p, times) ** (1.0 / p))


def decay_rate_fit(times, values, window=None) -> tuple[float, float]:
    """Exponential rate ``r`` in ``value ~ C e^{-r t}`` by least squares on ``log(value)``.

    Returns ``(rate, rms residual of the log fit)``.
    """
    t = np.asarray(times, dtype=float)
    v = np.asarray(values, dtype=float)
    if window is not None:
        sel = (t >= window[0]) & (t <= window[1])
        t, v = t[sel], v[sel]
    if t.size < 2:
        raise ValueError("need at least two samples in the fit window")
    if np.any(v <= 0):
        raise ValueError("decay fit needs positive values")
    coef, res, *_ = np.polyfit(t, np.log(v), 1, full=True)
    rms = float(np.sqrt(res[0] / t.size)) if res.size else 0.0
    return float(-coef[0]), rms


@dataclass
class MonitorVerdict:
    hypotheses_hold: bool
    conclusion_holds: bool | None
    window_end: float
    eps: float
    kappa0: float
    kappa_max: float
    margins: dict = field(default_factory=dict)


def kappa_monitor(traj, eps_prime: float) -> MonitorVerdict:
    """Check the kappa-propagation lemma on the longest initial window where it applies.

    With ``eps`` just below ``min(kappa0, 1/kappa0) / 100`` the hypotheses are
    ``Q(t) <= eps`` and ``||X(t)||_{C^{3/2}} <= eps t^{-1/2}``.  On the window
    where both hold the conclusion ``kappa <= 2 kappa0`` is checked; outside it
    nothing is claimed.
    """
    times = np.asarray(traj.times, dtype=float)
    states = traj.states
    k0 = kappa(states[0])
    eps = min(k0, 1.0 / k0) / 100 * (1 - 1e-9)
    q = 0.0
    end = 0
    q_max = c_max = 0.0
    kmax = k0
    for i in range(1, len(times)):
        t = times[i] - times[0]
        q_i = max(q, q_slice(states[0], states[i], t, eps_prime))
        c_i = holder_norm(states[i], 0.5, 1) * np.sqrt(t)
        if q_i > eps or c_i > eps:
            break
        q, end = q_i, i
        q_max, c_max = max(q_max, q_i), max(c_max, c_i)
        kmax = max(kmax, kappa(states[i]))
    hold = end > 0
    return MonitorVerdict(
        hypotheses_hold=hold,
        conclusion_holds=(kmax <= 2 * k0) if hold else None,
        window_end=float(times[end] - times[0]),
        eps=eps,
        kappa0=k0,
        kappa_max=kmax,
        margins={"q": eps - q_max, "c32": eps - c_max, "kappa": 2 * k0 - kmax},
    )
