"""Run Butcher tableaux on ODE test problems.

Implicit stage systems are solved by simplified Newton (Jacobian frozen at
the step start, finite differences unless the problem supplies one), with
a fixed-point fallback.  Includes canonical Hamiltonian presets, invariant
drift diagnostics and an empirical convergence-order harness.
"""
from __future__ import annotations

import io
from dataclasses import dataclass, field, replace

import numpy as np

from .reduce import RKTableau


class NonConvergence(RuntimeError):
    """Stage solve failed; carries iteration count and final residual."""

    def __init__(self, message, iterations=None, residual=None, step_index=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual
        self.step_index = step_index


class InstrumentationLimit(RuntimeError):
    """Errors too close to solver noise to measure a convergence slope."""


@dataclass
class SolverConfig:
    tol: float = 1e-13
    max_iter: int = 50
    fd_step: float = 1e-7


@dataclass
class Problem:
    """ODE test problem dz/dt = f(t, z) with optional extras."""

    name: str
    dim: int
    f: callable
    z0: np.ndarray
    hamiltonian: callable | None = None
    jacobian: callable | None = None
    exact: callable | None = None

    def __post_init__(self):
        self.z0 = np.asarray(self.z0, dtype=float)


def harmonic_oscillator(z0=(1.0, 0.0)) -> Problem:
    """H = (q^2 + p^2)/2 with z = (q, p); rotation with period 2 pi."""

    def f(t, z):
        return np.array([z[1], -z[0]])

    def ham(z):
        return 0.5 * (z[0] ** 2 + z[1] ** 2)

    def jac(t, z):
        return np.array([[0.0, 1.0], [-1.0, 0.0]])

    q0, p0 = float(z0[0]), float(z0[1])

    def exact(t):
        return np.array([q0 * np.cos(t) + p0 * np.sin(t),
                         p0 * np.cos(t) - q0 * np.sin(t)])

    return Problem("harmonic", 2, f, np.array(z0, dtype=float), ham, jac, exact)


def pendulum(z0=(1.2, 0.3)) -> Problem:
    """H = p^2/2 - cos(q) with z = (q, p)."""

    def f(t, z):
        return np.array([z[1], -np.sin(z[0])])

    def ham(z):
        return 0.5 * z[1] ** 2 - np.cos(z[0])

    def jac(t, z):
        return np.array([[0.0, 1.0], [-np.cos(z[0]), 0.0]])

    return Problem("pendulum", 2, f, np.array(z0, dtype=float), ham, jac)


def kepler2d(eccentricity: float = 0.6) -> Problem:
    """Planar Kepler problem, H = |p|^2/2 - 1/|q|, z = (q1, q2, p1, p2).

    Standard elliptic initial data: q = (1-e, 0), p = (0, sqrt((1+e)/(1-e))).
    """
    e = float(eccentricity)
    z0 = np.array([1.0 - e, 0.0, 0.0, np.sqrt((1.0 + e) / (1.0 - e))])

    def f(t, z):
        q = z[:2]
        r3 = float(q @ q) ** 1.5
        return np.array([z[2], z[3], -q[0] / r3, -q[1] / r3])

    def ham(z):
        return 0.5 * (z[2] ** 2 + z[3] ** 2) - 1.0 / np.sqrt(z[0] ** 2 + z[1] ** 2)

    def jac(t, z):
        q = z[:2]
        r2 = float(q @ q)
        r5 = r2 ** 2.5
        J = np.zeros((4, 4))
        J[0, 2] = J[1, 3] = 1.0
        J[2, 0] = (2.0 * q[0] ** 2 - q[1] ** 2) / r5
        J[3, 1] = (2.0 * q[1] ** 2 - q[0] ** 2) / r5
        J[2, 1] = J[3, 0] = 3.0 * q[0] * q[1] / r5
        return J

    return Problem("kepler", 4, f, z0, ham, jac)


PROBLEMS = {
    "harmonic": harmonic_oscillator,
    "pendulum": pendulum,
    "kepler": kepler2d,
}


def _fd_jacobian(f, t, z, rel_step):
    d = len(z)
    J = np.empty((d, d))
    h = rel_step * (1.0 + np.abs(z))
    for j in range(d):
        zp = z.copy()
        zm = z.copy()
        zp[j] += h[j]
        zm[j] -= h[j]
        J[:, j] = (f(t, zp) - f(t, zm)) / (2.0 * h[j])
    return J


def rk_step(rk: RKTableau, problem: Problem, t: float, z: np.ndarray, h: float,
            cfg: SolverConfig | None = None):
    """One step z -> z1; returns (z1, newton_iterations).

    Stage values solve Z_i = z + h sum_j a_ij f(t + c_j h, Z_j) to residual
    <= cfg.tol in the max norm (simplified Newton; frozen Jacobian).  h may
    be negative (adjoint steps); h = 0 is rejected.
    """
    cfg = cfg or SolverConfig()
    if h == 0.0:
        raise ValueError("step size must be nonzero")
    z = np.asarray(z, dtype=float)
    s, d = rk.s, len(z)
    jac = problem.jacobian or (lambda tt, zz: _fd_jacobian(problem.f, tt, zz, cfg.fd_step))
    J = np.asarray(jac(t, z), dtype=float)
    newton_matrix = np.eye(s * d) - h * np.kron(rk.A, J)

    Z = np.tile(z, (s, 1))
    F = np.empty((s, d))
    use_newton = True
    for it in range(1, cfg.max_iter + 1):
        for i in range(s):
            F[i] = problem.f(t + rk.c[i] * h, Z[i])
        R = Z - z[None, :] - h * (rk.A @ F)
        if not np.all(np.isfinite(R)):
            raise NonConvergence("stage residual is not finite", iterations=it,
                                 residual=float("nan"))
        resid = float(np.max(np.abs(R)))
        if resid <= cfg.tol:
            return z + h * (rk.b @ F), it
        if use_newton:
            try:
                delta = np.linalg.solve(newton_matrix, -R.ravel())
            except np.linalg.LinAlgError:
                use_newton = False
                delta = -R.ravel()
        else:
            delta = -R.ravel()  # fixed-point fallback
        Z = Z + delta.reshape(s, d)
    raise NonConvergence(
        f"stage solve did not reach tol={cfg.tol} in {cfg.max_iter} iterations",
        iterations=cfg.max_iter, residual=resid,
    )


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    newton_iters: np.ndarray
    invariants: np.ndarray | None = None

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def _step_count(t0: float, t1: float, h: float) -> int:
    n = (t1 - t0) / h
    n_round = round(n)
    if n_round < 0 or abs(n - n_round) > 4.0 * np.finfo(float).eps * max(1.0, abs(n)):
        raise ValueError(f"(t1-t0)/h = {n} is not an integer step count")
    return int(n_round)


def integrate(rk: RKTableau, problem: Problem, t0: float, t1: float, h: float,
              cfg: SolverConfig | None = None, z0=None) -> Trajectory:
    """Fixed-step integration from t0 to t1; h must divide the interval."""
    n = _step_count(t0, t1, h)
    z = problem.z0.copy() if z0 is None else np.asarray(z0, dtype=float)
    times = t0 + h * np.arange(n + 1)
    states = np.empty((n + 1, len(z)))
    iters = np.zeros(n + 1, dtype=int)
    states[0] = z
    for k in range(n):
        try:
            z, it = rk_step(rk, problem, float(times[k]), z, h, cfg)
        except NonConvergence as err:
            err.step_index = k
            raise
        states[k + 1] = z
        iters[k + 1] = it
    inv = None
    if problem.hamiltonian is not None:
        inv = np.array([problem.hamiltonian(state) for state in states])
    return Trajectory(times, states, iters, inv)


@dataclass
class DriftStats:
    max_drift: float
    final_drift: float
    rate: float


def invariant_drift(traj: Trajectory, problem: Problem) -> DriftStats:
    """Drift statistics of H along a trajectory (max, final, per-step fit)."""
    if problem.hamiltonian is None:
        raise ValueError(f"problem {problem.name!r} has no invariant")
    inv = traj.invariants
    drift = inv - inv[0]
    n = np.arange(len(inv), dtype=float)
    rate = float(np.polyfit(n, drift, 1)[0]) if len(inv) > 1 else 0.0
    return DriftStats(float(np.max(np.abs(drift))), float(drift[-1]), rate)


@dataclass
class OrderEstimate:
    slope: float
    pair_slopes: list
    hs: list
    errors: list
    reference: str


def empirical_order(rk: RKTableau, problem: Problem, t_span, h_list,
                    cfg: SolverConfig | None = None, refine: int = 20) -> OrderEstimate:
    """Least-squares convergence slope of log(end error) against log(h).

    The reference solution is the exact flow when available, otherwise the
    same method at h_min/refine.  Raises InstrumentationLimit when the
    error at the largest h is already within 100x of the solver tolerance.
    """
    cfg = cfg or SolverConfig()
    t0, t1 = float(t_span[0]), float(t_span[1])
    hs = sorted((float(h) for h in h_list), reverse=True)
    if len(hs) < 4:
        raise ValueError("need at least 4 step sizes")
    if problem.exact is not None:
        z_ref = problem.exact(t1 - t0)
        reference = "exact"
    else:
        z_ref = integrate(rk, problem, t0, t1, min(hs) / refine, cfg).final
        reference = f"self-refined (h_min/{refine})"
    errors = []
    for h in hs:
        z_end = integrate(rk, problem, t0, t1, h, cfg).final
        errors.append(float(np.linalg.norm(z_end - z_ref)))
    if errors[0] < 100.0 * cfg.tol:
        raise InstrumentationLimit(
            f"error {errors[0]:.2e} at h={hs[0]} is within 100x solver tolerance"
        )
    loge = np.log(errors)
    logh = np.log(hs)
    slope = float(np.polyfit(logh, loge, 1)[0])
    pair = list(np.diff(loge) / np.diff(logh))
    return OrderEstimate(slope, [float(v) for v in pair], hs, errors, reference)


def self_adjointness_defect(rk: RKTableau, problem: Problem, t: float, z, h: float,
                            cfg: SolverConfig | None = None) -> float:
    """|z - back(forward(z))| for one step of +h then one of -h."""
    z = np.asarray(z, dtype=float)
    z1, _ = rk_step(rk, problem, t, z, h, cfg)
    z2, _ = rk_step(rk, problem, t + h, z1, -h, cfg)
    return float(np.max(np.abs(z2 - z)))


def trajectory_csv(traj: Trajectory, problem: Problem) -> str:
    """CSV text: t, z_1..z_d, H, newton_iters (17 significant digits)."""
    d = traj.states.shape[1]
    out = io.StringIO()
    out.write("t," + ",".join(f"z_{i+1}" for i in range(d)) + ",H,newton_iters\n")
    have_h = traj.invariants is not None
    for k in range(len(traj.times)):
        row = [format(traj.times[k], ".17g")]
        row += [format(v, ".17g") for v in traj.states[k]]
        row.append(format(traj.invariants[k], ".17g") if have_h else "nan")
        row.append(str(int(traj.newton_iters[k])))
        out.write(",".join(row) + "\n")
    return out.getvalue()
