"""Time integration of the contour equation, its (Y, Z) split, and the toy model.

All integrators treat the stiff part ``Lambda / 4`` exactly through its
mode-wise exponential and approximate only the Duhamel integral of the
nonlinearity:

* ``etd1``   -- ``u+ = e^{-h Lambda/4} u + phi1 N(u)``
* ``etdrk2`` -- Cox-Matthews predictor-corrector, second order
* ``imex-be`` -- ``(1 + h Lambda / 4) u+ = u + h N(u)``
"""

from __future__ import annotations

import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Optional

import numpy as np

from . import diagnostics as diag
from .contour import _values, nonlinear_N
from .equilibrium import conjugate_multiplier, fit_circle, frak_N, project_P, project_Pi
from .errors import ConfigError, DegeneracyError
from .spectral import frac_laplacian, phi1_symbol, phi2_symbol, wavenumbers

log = logging.getLogger(__name__)

INTEGRATORS = ("etd1", "etdrk2", "imex-be")
KAPPA_CEILING = 1e6
BLOWUP_CEILING = 1e8


@dataclass
class SimConfig:
    n: int = 128
    m: Optional[int] = None
    dt: float = 1e-3
    t_final: float = 1.0
    integrator: str = "etd1"
    eps_prime: float = 0.01
    mu_grid: Optional[list] = None
    b_grid: Optional[list] = None
    t_grid: Optional[list] = None
    seed: int = 0
    save_every: int = 1
    diag_every: int = 1

    def __post_init__(self):
        self.integrator = self.integrator.lower()
        if self.m is None:
            self.m = 2 * self.n
        if self.n < 16 or self.n % 2 or self.m < 16 or self.m % 2:
            raise ConfigError(f"grid sizes must be even and >= 16 (n={self.n}, m={self.m})")
        if not self.dt > 0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if not self.t_final >= self.dt:
            raise ConfigError(f"horizon {self.t_final} shorter than one step {self.dt}")
        if self.integrator not in INTEGRATORS:
            raise ConfigError(f"unknown integrator {self.integrator!r}; choose from {INTEGRATORS}")
        if not 0 < self.eps_prime <= 0.1:
            raise ConfigError(f"eps_prime must lie in (0, 0.1], got {self.eps_prime}")
        if self.save_every < 1 or self.diag_every < 1:
            raise ConfigError("save_every and diag_every must be positive")

    @property
    def n_steps(self) -> int:
        return int(round(self.t_final / self.dt))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class Trajectory:
    """Stored states with their times and per-record diagnostics."""

    times: list = field(default_factory=list)
    states: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    status: str = "ok"
    message: str = ""
    config: Optional[SimConfig] = None

    def append(self, t: float, state: np.ndarray):
        if self.times and not t > self.times[-1]:
            raise ValueError("trajectory times must increase strictly")
        self.times.append(float(t))
        self.states.append(np.array(state, dtype=float))

    @property
    def t(self) -> np.ndarray:
        return np.asarray(self.times)

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]

    def __len__(self):
        return len(self.times)

    def series(self, key: str) -> np.ndarray:
        return np.array([d[key] for d in self.diagnostics])

    def diag_times(self) -> np.ndarray:
        return self.series("t")


# --- single steps -------------------------------------------------------------


class _Stepper:
    """Precomputed mode-wise weights for one ``(n, dt)`` pair."""

    def __init__(self, n: int, dt: float):
        k = wavenumbers(n)
        self.n = n
        self.dt = dt
        self.expo = np.exp(-0.25 * dt * k)
        self.phi1 = phi1_symbol(k, dt)
        self.phi2 = phi2_symbol(k, dt)
        self.implicit = 1.0 / (1.0 + 0.25 * dt * k)

    def _rf(self, u):
        return np.fft.rfft(u, axis=-1)

    def _irf(self, uh):
        return np.fft.irfft(uh, n=self.n, axis=-1)

    def etd1(self, u, nonlin):
        uh, nh = self._rf(u), self._rf(nonlin(u))
        return self._irf(self.expo * uh + self.phi1 * nh)

    def etdrk2(self, u, nonlin):
        uh, nh = self._rf(u), self._rf(nonlin(u))
        a = self._irf(self.expo * uh + self.phi1 * nh)
        na = self._rf(nonlin(a))
        return a + self._irf(self.phi2 * (na - nh))

    def imex_be(self, u, nonlin):
        uh, nh = self._rf(u), self._rf(nonlin(u))
        return self._irf(self.implicit * (uh + self.dt * nh))

    def step(self, kind: str, u, nonlin):
        if kind == "etd1":
            return self.etd1(u, nonlin)
        if kind == "etdrk2":
            return self.etdrk2(u, nonlin)
        if kind == "imex-be":
            return self.imex_be(u, nonlin)
        raise ConfigError(f"unknown integrator {kind!r}")


def _peskin_rhs(m):
    return lambda x: nonlinear_N(x, m)


def step_etd1(curve, dt: float, m: int | None = None, nonlin: Callable | None = None) -> np.ndarray:
    """One exponential-Euler step of ``X_t + Lambda X / 4 = N(X)``.

    ``nonlin=lambda x: 0`` gives the exact linear flow.
    """
    x = _values(curve)
    return _Stepper(x.shape[-1], dt).etd1(x, nonlin or _peskin_rhs(m))


def step_etdrk2(curve, dt: float, m: int | None = None, nonlin: Callable | None = None) -> np.ndarray:
    x = _values(curve)
    return _Stepper(x.shape[-1], dt).etdrk2(x, nonlin or _peskin_rhs(m))


def step_imex_be(curve, dt: float, m: int | None = None, nonlin: Callable | None = None) -> np.ndarray:
    x = _values(curve)
    return _Stepper(x.shape[-1], dt).imex_be(x, nonlin or _peskin_rhs(m))


# --- checkpoints -------------------------------------------------------------

CHECKPOINT_FORMAT = "peskin-checkpoint/1"


def save_checkpoint(path, config: SimConfig, step: int, state: np.ndarray) -> Path:
    """Write ``(config, step, time, state)`` as JSON with hex-encoded floats (bit exact)."""
    path = Path(path)
    payload = {
        "format": CHECKPOINT_FORMAT,
        "config": config.to_dict(),
        "step": int(step),
        "time": float(step * config.dt).hex(),
        "shape": list(state.shape),
        "values": [float(v).hex() for v in np.ravel(state)],
    }
    path.write_text(json.dumps(payload, indent=1))
    return path


def load_checkpoint(path) -> tuple[SimConfig, int, np.ndarray]:
    try:
        payload = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"unreadable checkpoint {path}: {exc}") from exc
    if payload.get("format") != CHECKPOINT_FORMAT:
        raise ConfigError(f"unsupported checkpoint format {payload.get('format')!r}")
    config = SimConfig(**payload["config"])
    state = np.array([float.fromhex(v) for v in payload["values"]]).reshape(payload["shape"])
    return config, int(payload["step"]), state


# --- full runs ---------------------------------------------------------------


class _Recorder:
    """Collects per-step diagnostics and the running Q value."""

    def __init__(self, x0: np.ndarray, config: SimConfig, t0: float = 0.0):
        self.x0 = x0
        self.cfg = config
        self.q = 0.0
        self.t0 = t0

    def record(self, t: float, x: np.ndarray) -> dict:
        circle, residual = fit_circle(x)
        y = project_Pi(x)
        if t > self.t0:
            self.q = max(self.q, diag.q_slice(self.x0, x, t - self.t0, self.cfg.eps_prime))
        return {
            "t": float(t),
            "kappa": diag.kappa(x),
            "pi_norm_inf": residual,
            "y_c32": diag.holder_norm(y, 0.5, 1),
            "x_c32": diag.holder_norm(x, 0.5, 1),
            "A": circle.A,
            "B": circle.B,
            "C1": circle.C1,
            "C2": circle.C2,
            "q": self.q,
        }


def _run(x0, config: SimConfig, advance, start_step=0, checkpoint_path=None, checkpoint_every=0, record=True):
    traj = Trajectory(config=config)
    x = np.array(x0, dtype=float)
    n_steps = config.n_steps
    rec = _Recorder(x, config, t0=start_step * config.dt) if record else None
    traj.append(start_step * config.dt, x)
    if rec:
        traj.diagnostics.append(rec.record(start_step * config.dt, x))
    for k in range(start_step + 1, n_steps + 1):
        t = k * config.dt
        try:
            x = advance(x)
        except DegeneracyError as exc:
            traj.status, traj.message = "degenerate", str(exc)
            log.warning("stopped at t=%.6g: %s", t, exc)
            break
        if not np.all(np.isfinite(x)) or np.max(np.abs(x)) > BLOWUP_CEILING:
            traj.status, traj.message = "blowup", f"solution exceeded {BLOWUP_CEILING:g} at t={t:.6g}"
            break
        last = k == n_steps
        if rec and (k % config.diag_every == 0 or last):
            d = rec.record(t, x)
            traj.diagnostics.append(d)
            if not d["kappa"] <= KAPPA_CEILING:
                traj.append(t, x)
                traj.status, traj.message = "degenerate", f"kappa {d['kappa']:.3g} above {KAPPA_CEILING:g}"
                break
        if k % config.save_every == 0 or last:
            traj.append(t, x)
        if checkpoint_path and checkpoint_every and k % checkpoint_every == 0:
            save_checkpoint(checkpoint_path, config, k, x)
    return traj


def simulate(curve, config: SimConfig, start_step: int = 0, checkpoint_path=None,
             checkpoint_every: int = 0, record: bool = True) -> Trajectory:
    """Integrate ``X_t + Lambda X / 4 = N(X)`` from ``curve`` to ``config.t_final``.

    A degeneracy (loss of well-stretchedness) ends the run early with
    ``status == "degenerate"``; it is not raised.
    """
    x0 = _values(curve)
    if x0.shape[-1] != config.n:
        raise ConfigError(f"curve has {x0.shape[-1]} nodes, config expects {config.n}")
    stepper = _Stepper(config.n, config.dt)
    rhs = _peskin_rhs(config.m)
    return _run(x0, config, lambda x: stepper.step(config.integrator, x, rhs),
                start_step, checkpoint_path, checkpoint_every, record)


def resume(checkpoint, record: bool = True) -> Trajectory:
    config, step, state = load_checkpoint(checkpoint)
    return simulate(state, config, start_step=step, record=record)


class _SplitStepper:
    """Advance ``Y = Pi X`` with the L-semigroup and ``Z = P X`` explicitly."""

    def __init__(self, config: SimConfig):
        self.cfg = config
        self.dt = config.dt
        self.m = config.m

    def _conj(self, w, sym):
        return conjugate_multiplier(w, sym, project=True)

    def _expo(self, w):
        return self._conj(w, lambda k: np.exp(-0.25 * self.dt * k))

    def _phi1(self, w):
        return self._conj(w, lambda k: phi1_symbol(k, self.dt))

    def _phi2(self, w):
        return self._conj(w, lambda k: phi2_symbol(k, self.dt))

    def __call__(self, x):
        dt, kind = self.dt, self.cfg.integrator
        y, z = project_Pi(x), project_P(x)
        f = frak_N(x, self.m)
        fy, fz = project_Pi(f), project_P(f)
        if kind == "imex-be":
            y_new = self._conj(y + dt * fy, lambda k: 1.0 / (1.0 + 0.25 * dt * k))
            return y_new + z + dt * fz
        ya = self._expo(y) + self._phi1(fy)
        za = z + dt * fz
        if kind == "etd1":
            return ya + za
        fa = frak_N(ya + za, self.m)
        y_new = ya + self._phi2(project_Pi(fa) - fy)
        z_new = z + 0.5 * dt * (fz + project_P(fa))
        return y_new + z_new


def simulate_split(curve, config: SimConfig, record: bool = True) -> Trajectory:
    """Integrate the equivalent system ``Y_t + L Y = Pi N~(X)``, ``Z_t = P N~(X)``.

    States are stored recomposed as ``X = Y + Z``.
    """
    x0 = _values(curve)
    return _run(x0, config, _SplitStepper(config), record=record)


def toy_nonlinearity(f: np.ndarray, sigma: float) -> np.ndarray:
    return np.abs(frac_laplacian(f, sigma)) ** (1.0 / sigma)


def simulate_toy(f0, sigma: float, config: SimConfig, nonlinear: bool = True) -> Trajectory:
    """Integrate ``f_t + Lambda f / 4 = |Lambda^sigma f|^{1/sigma}`` for a scalar field."""
    if not 0 < sigma < 1:
        raise ConfigError(f"sigma must lie in (0, 1), got {sigma}")
    f0 = _values(f0)
    if f0.ndim != 1:
        raise ConfigError("toy model runs on scalar fields")
    stepper = _Stepper(f0.shape[-1], config.dt)
    if nonlinear:
        rhs = lambda f: toy_nonlinearity(f, sigma)  # noqa: E731
    else:
        rhs = np.zeros_like
    return _run(f0, config, lambda f: stepper.step(config.integrator, f, rhs), record=False)


def convergence_order(errors, dts) -> float:
    """Least-squares slope of ``log(error)`` against ``log(dt)``."""
    return float(np.polyfit(np.log(dts), np.log(errors), 1)[0])


def self_convergence(run: Callable[[float], np.ndarray], dts) -> tuple[np.ndarray, float]:
    """Errors ``||u_dt - u_{dt/2}||_inf`` for each ``dt`` and the fitted order."""
    errs = []
    for dt in dts:
        errs.append(float(np.max(np.abs(run(dt) - run(dt / 2)))))
    errs = np.array(errs)
    return errs, convergence_order(errs, dts)
