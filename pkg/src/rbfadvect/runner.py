"""Run orchestration: config validation, operator assembly, execution.

Maps (problem, method) pairs onto the operator classes, runs the SSPRK
integrator with recording hooks, and collects a RunReport.  Blow-ups do
not crash a run: the report comes back flagged with the blow-up time and
infinite errors.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .diagnostics import (
    ConservationRecorder,
    EnergyRecorder,
    MaxAbsRecorder,
    RunReport,
    average_order,
    discrete_errors,
    l2_error,
)
from .errors import ConfigurationError
from .interpolation import build_nodal_basis, equidistant_centers, grid_centers
from .kernels import kernel_from_name
from .operators import (
    SatAcousticSystem,
    SatAdvection1D,
    SatAdvection2D,
    SatVariableCoeff1D,
    UsualAdvection1D,
    UsualAdvection2D,
    build_fr_operator,
)
from .problems import ScatterConfig, problem_by_name, scattered_centers
from .quadrature import QuadratureRule
from .timestep import BlowUpError, TimeIntegration, integrate

DEFAULT_T_END = {
    "inflow_bump": 0.5,
    "periodic_sin2": 100.0,
    "varcoeff": 1.5,
    "acoustic": 100.0,
    "advect2d": 0.52632,
}

_METHODS = {
    "advection1d": ("usual", "fr", "sat"),
    "varcoeff1d": ("sat",),
    "system1d": ("sat",),
    "advection2d": ("usual", "sat"),
}


@dataclass(frozen=True)
class RunConfig:
    """Validated inputs of one simulation or study leg."""

    problem: str
    method: str
    kernel: str = "cubic"
    n: int = 40
    m: int | None = None
    cfl: float | None = None
    t_end: float | None = None
    tau_l: float = -1.0
    tau_r: float = -1.0
    r0: float = 0.5
    r1: float = 0.5
    alpha_skew: float = 0.5
    sigma: float | None = None
    seed: int = 0
    quad_points: int = 10
    quad_panels: int = 1
    record_stride: int = 10
    tsvd_rtol: float | None = None


def validate_config(cfg: RunConfig):
    """Reject every documented precondition violation before any allocation."""
    try:
        problem = problem_by_name(cfg.problem)
    except KeyError as err:
        raise ConfigurationError(str(err)) from err
    if cfg.method not in _METHODS[problem.kind]:
        raise ConfigurationError(
            f"method {cfg.method!r} is not available for problem {cfg.problem!r}"
        )
    kern = kernel_from_name(cfg.kernel)  # raises ValueError on bad spec
    if cfg.m is not None and cfg.m < kern.cpd_order:
        raise ConfigurationError(
            f"polynomial degree bound m={cfg.m} is below the kernel CPD order {kern.cpd_order}"
        )
    if cfg.method == "sat" and not cfg.tau_l < -0.5:
        raise ConfigurationError(f"tau_L = {cfg.tau_l} violates the stability bound tau_L < -1/2")
    if problem.kind == "system1d" and not (0 < cfg.r0 < 1 and 0 < cfg.r1 < 1):
        raise ConfigurationError("R0 and R1 must lie in (0, 1)")
    if cfg.sigma is not None and cfg.sigma <= 0:
        raise ConfigurationError("sigma must be positive")
    if cfg.sigma is not None and problem.kind != "advection1d":
        raise ConfigurationError("scattered centers are only supported for 1D scalar problems")
    if cfg.n < 2:
        raise ConfigurationError("need at least N = 2")
    if not 1 <= cfg.quad_points <= 64:
        raise ConfigurationError("quad_points must lie in 1..64")
    if cfg.t_end is not None and cfg.t_end < 0:
        raise ConfigurationError("t_end must be nonnegative")
    if cfg.record_stride < 1:
        raise ConfigurationError("record_stride must be >= 1")
    return problem, kern


def _default_cfl(cfg: RunConfig, kind: str) -> float:
    if cfg.cfl is not None:
        return cfg.cfl
    # The 2D SAT run needs the reduced CFL for stable computations.
    if kind == "advection2d" and cfg.method == "sat":
        return 0.01
    return 0.1


@dataclass
class RunSetup:
    """Everything assembled and ready to integrate."""

    config: RunConfig
    problem: object
    op: object
    nb: object
    rule: QuadratureRule
    u0: np.ndarray
    ti: TimeIntegration


def build_run(cfg: RunConfig) -> RunSetup:
    problem, kern = validate_config(cfg)
    rule = QuadratureRule(cfg.quad_points, cfg.quad_panels)
    degree = cfg.m

    if problem.kind == "advection2d":
        centers = grid_centers(cfg.n, cfg.n, problem.domain)
        nb = build_nodal_basis(centers, kern, degree, domain=problem.domain)
    else:
        lo, hi = problem.domain
        if cfg.sigma is not None:
            centers = scattered_centers(cfg.n, ScatterConfig(cfg.sigma, cfg.seed))
            if (lo, hi) != (0.0, 1.0):
                pts = lo + (hi - lo) * centers.points
                from .interpolation import CenterSet

                centers = CenterSet(pts)
        else:
            centers = equidistant_centers(cfg.n, lo, hi)
        nb = build_nodal_basis(centers, kern, degree, domain=[(lo, hi)])

    if problem.kind == "advection1d":
        a = problem.velocity
        if cfg.method == "usual":
            op = UsualAdvection1D(nb, a, g=problem.boundary)
        elif cfg.method == "fr":
            op = build_fr_operator(nb, a, g=problem.boundary, rule=rule, tsvd_rtol=cfg.tsvd_rtol)
        else:
            op = SatAdvection1D(
                nb, a, g=problem.boundary, rule=rule, tau_l=cfg.tau_l, tau_r=cfg.tau_r,
            )
        u0 = problem.initial(centers.points[:, 0])
    elif problem.kind == "varcoeff1d":
        op = SatVariableCoeff1D(
            nb, problem.velocity_fn, problem.velocity_prime_fn, problem.boundary,
            rule=rule, tau_l=cfg.tau_l, alpha=cfg.alpha_skew,
        )
        u0 = problem.initial(centers.points[:, 0])
    elif problem.kind == "system1d":
        op = SatAcousticSystem(
            nb, problem.wave_speed, problem.boundary_left, problem.boundary_right,
            rule=rule, r0=cfg.r0, r1=cfg.r1,
        )
        zero = problem.initial(centers.points[:, 0])
        u0 = np.concatenate([zero, zero])
    else:
        x, y = centers.points[:, 0], centers.points[:, 1]
        if cfg.method == "usual":
            op = UsualAdvection2D(nb, problem.velocity)
        else:
            op = SatAdvection2D(nb, problem.velocity, rule=rule)
        u0 = problem.initial(x, y)

    t_end = cfg.t_end if cfg.t_end is not None else DEFAULT_T_END[cfg.problem]
    ti = TimeIntegration(t_end=t_end, cfl=_default_cfl(cfg, problem.kind), record_stride=cfg.record_stride)
    return RunSetup(cfg, problem, op, nb, rule, np.asarray(u0, dtype=float), ti)


def execute_run(cfg: RunConfig) -> RunReport:
    """Integrate one configured run and collect all diagnostics."""
    setup = build_run(cfg)
    problem, op, nb, rule = setup.problem, setup.op, setup.nb, setup.rule
    kern_name = nb.kernel.name

    report = RunReport(
        problem=cfg.problem, method=cfg.method, kernel=kern_name, n=cfg.n,
        cond_vandermonde=nb.vandermonde_cond,
        sigma=cfg.sigma, seed=cfg.seed if cfg.sigma is not None else None,
        rng="numpy-pcg64" if cfg.sigma is not None else None,
    )
    if hasattr(op, "cond_correction"):
        report.cond_correction = op.cond_correction

    energy = EnergyRecorder(nb, rule, n_fields=problem.n_fields)
    maxabs = MaxAbsRecorder()
    hooks = [energy, maxabs]
    if op.variant == "fr":
        hooks.append(ConservationRecorder(op))

    u_final = None
    try:
        u_final, trace = integrate(op, setup.u0, setup.ti, hooks)
        report.steps = trace.steps
    except BlowUpError as err:
        report.blew_up = True
        report.blowup_time = err.t
        report.steps = err.step or 0
        report.error_l1 = report.error_linf = report.error_l2 = math.inf

    report.energy = energy.series
    report.state_max = maxabs.value
    for hook in hooks:
        if isinstance(hook, ConservationRecorder):
            report.conservation = hook.series

    if u_final is not None and problem.exact is not None:
        t_end = setup.ti.t_end
        pts = nb.centers.points
        if problem.kind == "advection2d":
            exact_nodal = problem.exact(t_end, pts[:, 0], pts[:, 1])
            exact_fn = lambda x, y: problem.exact(t_end, x, y)
        else:
            exact_nodal = problem.exact(t_end, pts[:, 0])
            exact_fn = lambda x: problem.exact(t_end, x)
        n_per_field = nb.n
        report.error_l1, report.error_linf = discrete_errors(u_final[:n_per_field], exact_nodal)
        report.error_l2 = l2_error(nb, u_final[:n_per_field], exact_fn, rule)
    return report


def run_study(cfg: RunConfig, n_values, workers: int = 1):
    """Execute one config across several N, returning reports plus orders.

    One blow-up does not abort the study; orders over any non-finite
    column come back as nan.
    """
    configs = [replace(cfg, n=int(n)) for n in n_values]
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            reports = list(pool.map(execute_run, configs))
    else:
        reports = [execute_run(c) for c in configs]
    orders = {}
    for key in ("error_l1", "error_linf"):
        errs = [getattr(r, key) for r in reports]
        if len(errs) >= 2 and all(math.isfinite(e) and e > 0 for e in errs):
            orders[key] = average_order(errs)
        else:
            orders[key] = math.nan
    return reports, orders
