"""
Explicit Runge-Kutta drivers: classical RK4 on a fixed grid and the
Dormand-Prince 5(4) pair with PI step control and Hermite dense output.
"""

import logging
import math

import numpy as np

from expr import DomainError
from integrate.errors import IntegrationError, StepUnderflowError
from integrate.trajectory import Trajectory

logger = logging.getLogger(__name__)

# Dormand-Prince tableau
C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
E = B5 - B4

DEFAULT_CONTROL = {
    "safety": 0.9,
    "min_factor": 0.2,
    "max_factor": 5.0,
    "alpha": 0.7,
    "beta": 0.4,
    "min_step_fraction": 1e-12,
}


def _evaluate(system, t, y, last_t, last_y):
    try:
        k = system.rhs(t, y)
    except DomainError as e:
        raise IntegrationError(f"Domain error at t = {t:.17g}: {e}", last_t, last_y) from e
    if not np.all(np.isfinite(k)):
        raise IntegrationError(f"Non-finite derivative at t = {t:.17g}", last_t, last_y)
    return k


def _check_state(y, t, last_t, last_y):
    if not np.all(np.isfinite(y)):
        raise IntegrationError(f"Non-finite state at t = {t:.17g}", last_t, last_y)


def _metadata(system, extra):
    meta = dict(system.metadata)
    meta.update(extra)
    return meta


def rk4_step(system, t, y, h, last_t=None, last_y=None):
    k1 = _evaluate(system, t, y, last_t, last_y)
    k2 = _evaluate(system, t + h / 2, y + h / 2 * k1, last_t, last_y)
    k3 = _evaluate(system, t + h / 2, y + h / 2 * k2, last_t, last_y)
    k4 = _evaluate(system, t + h, y + h * k3, last_t, last_y)
    return y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate_fixed(system, y0, t0, t1, dt, t_eval=None):
    """
    Classical RK4 with step ``dt`` (the last step shortened to land on t1).
    Every step is sampled unless ``t_eval`` is given, in which case the grid
    also steps exactly onto each requested time and only those are kept.
    """
    if dt <= 0:
        raise IntegrationError(f"Step size must be positive, got {dt}")
    y = np.asarray(y0, dtype=float).copy()
    if y.shape != (system.dimension,):
        raise IntegrationError(f"Initial state has width {y.size}, system has {system.dimension} states")
    if t1 < t0:
        raise IntegrationError("Integration runs forward in time only")
    _check_state(y, t0, None, None)

    targets = None if t_eval is None else sorted(float(s) for s in t_eval)
    if targets is not None and (targets[0] < t0 or targets[-1] > t1):
        raise IntegrationError("Requested sample times lie outside the integration interval")

    times, rows = [], []
    if targets is None or (targets and targets[0] == t0):
        times.append(t0)
        rows.append(y.copy())
    next_target = 1 if targets and targets[0] == t0 else 0

    t = t0
    n = 0
    tiny = 1e-14 * max(1.0, abs(t1))
    while t1 - t > tiny:
        end = t0 + (n + 1) * dt
        if targets is not None and next_target < len(targets) and targets[next_target] < end:
            end = targets[next_target]
        end = min(end, t1)
        h = end - t
        y_new = rk4_step(system, t, y, h, t, y.copy())
        _check_state(y_new, end, t, y.copy())
        t, y = end, y_new
        if abs(t - (t0 + (n + 1) * dt)) <= tiny:
            n += 1
        if targets is None:
            times.append(t)
            rows.append(y.copy())
        elif next_target < len(targets) and abs(t - targets[next_target]) <= tiny:
            times.append(t)
            rows.append(y.copy())
            next_target += 1
    logger.debug(f"RK4: {len(times)} samples on [{t0}, {t1}] with dt = {dt}")
    return Trajectory(np.array(times), np.array(rows), system.columns,
                      _metadata(system, {"method": "rk4", "dt": dt}))


def _initial_step(system, t0, y0, f0, horizon, rel_tol, abs_tol):
    """Starting step from the local Lipschitz estimate (order 5)."""
    scale = abs_tol + rel_tol * np.abs(y0)
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, horizon)
    f1 = _evaluate(system, t0 + h0, y0 + h0 * f0, t0, y0)
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, horizon)


def _hermite(t, t_a, y_a, f_a, t_b, y_b, f_b):
    h = t_b - t_a
    s = (t - t_a) / h
    h00 = 2 * s ** 3 - 3 * s ** 2 + 1
    h10 = s ** 3 - 2 * s ** 2 + s
    h01 = -2 * s ** 3 + 3 * s ** 2
    h11 = s ** 3 - s ** 2
    return h00 * y_a + h10 * h * f_a + h01 * y_b + h11 * h * f_b


def integrate_adaptive(system, y0, t0, t1, rel_tol, abs_tol, t_eval=None, control=None, max_steps=1_000_000):
    """
    Dormand-Prince 5(4) with first-same-as-last stages and PI step control.
    Without ``t_eval`` every accepted step is sampled; with it, samples come
    from cubic Hermite interpolation between accepted steps.
    """
    if rel_tol <= 0 or abs_tol <= 0:
        raise IntegrationError("Tolerances must be positive")
    settings = dict(DEFAULT_CONTROL)
    settings.update(control or {})
    y = np.asarray(y0, dtype=float).copy()
    if y.shape != (system.dimension,):
        raise IntegrationError(f"Initial state has width {y.size}, system has {system.dimension} states")
    if t1 < t0:
        raise IntegrationError("Integration runs forward in time only")
    _check_state(y, t0, None, None)
    meta = _metadata(system, {"method": "dopri5", "rel_tol": rel_tol, "abs_tol": abs_tol})

    targets = None if t_eval is None else sorted(float(s) for s in t_eval)
    if targets is not None and targets and (targets[0] < t0 or targets[-1] > t1):
        raise IntegrationError("Requested sample times lie outside the integration interval")

    if t1 == t0:
        return Trajectory(np.array([t0]), y.reshape(1, -1), system.columns, meta)

    horizon = t1 - t0
    h_min = settings["min_step_fraction"] * horizon
    safety, alpha, beta = settings["safety"], settings["alpha"], settings["beta"]
    min_factor, max_factor = settings["min_factor"], settings["max_factor"]

    f = _evaluate(system, t0, y, None, None)
    h = _initial_step(system, t0, y, f, horizon, rel_tol, abs_tol)

    times, rows = [], []
    next_target = 0
    if targets is None:
        times.append(t0)
        rows.append(y.copy())
    else:
        while next_target < len(targets) and targets[next_target] == t0:
            times.append(t0)
            rows.append(y.copy())
            next_target += 1

    t = t0
    err_prev = 1e-4
    accepted = rejected = 0
    steps = 0
    while t < t1:
        steps += 1
        if steps > max_steps:
            raise IntegrationError(f"Exceeded {max_steps} steps", t, y.copy())
        if h < h_min:
            raise StepUnderflowError(f"Step size {h:.3g} underflowed the minimum {h_min:.3g}", t, y.copy())
        last = t + h >= t1
        if last:
            h = t1 - t

        k = [f]
        for i in range(1, 7):
            y_stage = y + h * sum(a * k[j] for j, a in enumerate(A[i]) if a != 0.0)
            k.append(_evaluate(system, t + C[i] * h, y_stage, t, y.copy()))
        y_new = y + h * sum(b * k[i] for i, b in enumerate(B5) if b != 0.0)
        error = h * sum(e * k[i] for i, e in enumerate(E) if e != 0.0)
        scale = abs_tol + rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.sqrt(np.mean((error / scale) ** 2)))
        if not math.isfinite(err) or not np.all(np.isfinite(y_new)):
            raise IntegrationError(f"Non-finite state at t = {t + h:.17g}", t, y.copy())

        if err <= 1.0:
            t_new = t1 if last else t + h
            f_new = k[6]
            if targets is None:
                times.append(t_new)
                rows.append(y_new.copy())
            else:
                while next_target < len(targets) and targets[next_target] <= t_new:
                    s = targets[next_target]
                    times.append(s)
                    rows.append(y_new.copy() if s == t_new else _hermite(s, t, y, f, t_new, y_new, f_new))
                    next_target += 1
            t, y, f = t_new, y_new, f_new
            accepted += 1
            if err == 0.0:
                factor = max_factor
            else:
                factor = safety * err ** (-alpha / 5) * err_prev ** (beta / 5)
            factor = min(max_factor, max(min_factor, factor))
            err_prev = max(err, 1e-4)
        else:
            rejected += 1
            factor = max(min_factor, safety * err ** (-1 / 5))
        h *= factor

    logger.debug(f"DOPRI5: {accepted} accepted, {rejected} rejected steps on [{t0}, {t1}]")
    meta.update({"accepted_steps": accepted, "rejected_steps": rejected})
    return Trajectory(np.array(times), np.array(rows), system.columns, meta)
