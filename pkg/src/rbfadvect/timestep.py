"""SSPRK(3,3) time integration with CFL step selection and recording hooks.

The three-stage scheme is the optimal third-order strong-stability
preserving Runge-Kutta method written as convex combinations of Euler
steps.  All three stage evaluations receive the step's base time t, so
boundary data is refreshed per stage but not shifted to intermediate
times; with the CFL constants in use the difference from shifted stage
times sits below the spatial error floor.  The last step is truncated so
the trajectory lands exactly on the requested end time, which keeps
errors comparable across runs.  Any non-finite entry after a stage raises
a structured BlowUpError instead of propagating NaNs.
"""

from dataclasses import dataclass

import numpy as np


class BlowUpError(RuntimeError):
    """The state left the finite range during time integration."""

    def __init__(self, t: float, stage: int, step: int | None = None):
        self.t = t
        self.stage = stage
        self.step = step
        super().__init__(f"non-finite state at t={t:.6g}, stage {stage}" +
                         (f", step {step}" if step is not None else ""))


@dataclass(frozen=True)
class TimeIntegration:
    """CFL constant, end time and recording stride for one trajectory."""

    t_end: float
    cfl: float = 0.1
    record_stride: int = 10

    def __post_init__(self):
        if self.t_end < 0:
            raise ValueError("end time must be nonnegative")
        if self.cfl <= 0:
            raise ValueError("CFL constant must be positive")
        if self.record_stride < 1:
            raise ValueError("record stride must be >= 1")


@dataclass
class IntegrationTrace:
    """What the integrator did: step count, nominal dt, landing time."""

    steps: int
    dt: float
    t_final: float


def compute_dt(cfl: float, h: float, lambda_max: float) -> float:
    """Time step C*h/lambda_max from spacing and the largest wave speed."""
    if cfl <= 0 or h <= 0 or lambda_max <= 0:
        raise ValueError("CFL constant, spacing and wave speed must all be positive")
    return cfl * h / lambda_max


def _check_finite(u: np.ndarray, t: float, stage: int):
    if not np.all(np.isfinite(u)):
        raise BlowUpError(t, stage)


def ssprk33_step(rhs, u: np.ndarray, t: float, dt: float) -> np.ndarray:
    """One SSPRK(3,3) step of du/dt = rhs(u, t).

    Every stage evaluates the right-hand side at the step's base time t.
    """
    if dt <= 0:
        raise ValueError("time step must be positive")
    with np.errstate(over="ignore", invalid="ignore"):
        u1 = u + dt * rhs(u, t)
        _check_finite(u1, t, 1)
        u2 = 0.75 * u + 0.25 * u1 + 0.25 * dt * rhs(u1, t)
        _check_finite(u2, t, 2)
        u_new = u / 3.0 + (2.0 / 3.0) * u2 + (2.0 / 3.0) * dt * rhs(u2, t)
        _check_finite(u_new, t, 3)
    return u_new


def integrate(op, u0, ti: TimeIntegration, hooks=()) -> tuple[np.ndarray, IntegrationTrace]:
    """Evolve an operator's state to ``ti.t_end``, sampling hooks en route.

    Hooks are callables ``hook(t, u)`` invoked at t = 0, every
    ``record_stride`` accepted steps, and at the final time.  Blow-ups
    propagate with step context attached; hook data collected so far stays
    with the caller.
    """
    u = np.array(u0, dtype=float)
    t = 0.0
    u = op.post_step(u, t)
    for hook in hooks:
        hook(t, u)
    dt0 = compute_dt(ti.cfl, op.nb.centers.h, op.lambda_max)
    step = 0
    while t < ti.t_end:
        last = ti.t_end - t <= dt0 * (1.0 + 1e-12)
        dt = ti.t_end - t if last else dt0
        try:
            u = ssprk33_step(op.rhs, u, t, dt)
        except BlowUpError as err:
            err.step = step
            raise
        t = ti.t_end if last else t + dt
        step += 1
        u = op.post_step(u, t)
        if step % ti.record_stride == 0 or t == ti.t_end:
            for hook in hooks:
                hook(t, u)
    return u, IntegrationTrace(steps=step, dt=dt0, t_final=t)
