"""Deterministic integration of the averaged infection dynamics.

integrate() runs classical fixed-step RK4 on the coupled susceptible and
infected probability vectors, recording thinned samples together with
the transverse eigenvalue and a Perron-weighted infection average.
simulate() adds outcome classification against the infection-free and
endemic attractors, resurgence detection, and eigenvalue crossing
events. dregular_pcrit() brackets the critical initial infection level
of a regular network by bisecting on the simulated outcome.
"""

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _kernels
from .model import require_valid, dregular_check
from .spectral import leading_eig, lambda_surface, ConvergenceError
from .reproduction import extreme_numbers, classify_regime, Regime
from .equilibria import solve_ee

IFE_STATE_TOL = 1e-7
REST_TOL = 1e-9
EE_DIST_TOL = 1e-6
CROSSING_TIME_TOL = 1e-6
DEFAULT_T_END = 500.0
DEFAULT_DT = 0.01


class OutcomeKind(Enum):
    CONVERGED_IFE = "ConvergedIFE"
    CONVERGED_EE = "ConvergedEE"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    p_s: np.ndarray
    p_i: np.ndarray
    weighted_avg: np.ndarray
    lambda_track: np.ndarray


@dataclass(frozen=True)
class ResurgenceReport:
    initial_peak: float
    dip: float
    dip_time: float
    resurge_time: float


@dataclass(frozen=True)
class SimOutcome:
    kind: OutcomeKind
    p_s_final: np.ndarray
    p_i_final: np.ndarray
    ee_distance: float
    horizon: float
    resurgence: object


@dataclass(frozen=True)
class CrossingEvent:
    t: float
    direction: int


def _validate_initial(model, p_s0, p_i0):
    n = model.n
    p_s0 = np.asarray(p_s0, dtype=float)
    p_i0 = np.asarray(p_i0, dtype=float)
    if p_s0.shape != (n,) or p_i0.shape != (n,):
        raise ValueError("initial vectors must have length %d" % n)
    for name, v in (("p_s0", p_s0), ("p_i0", p_i0)):
        if np.any(v < -1e-12) or np.any(v > 1.0 + 1e-12):
            raise ValueError("%s must lie in [0, 1]" % name)
    if np.any(p_s0 + p_i0 > 1.0 + 1e-9):
        raise ValueError("p_s0 + p_i0 must not exceed 1")
    return np.clip(p_s0, 0.0, 1.0), np.clip(p_i0, 0.0, 1.0)


def rhs(model, p_s, p_i):
    """Time derivative of the probability state.

    Susceptibles only drain: ds_j = -p_s_j * sum_k B_jk p_i_k. The
    infected balance gains from first infections and reinfections and
    loses to recovery.
    """
    p_s = np.asarray(p_s, dtype=float)
    p_i = np.asarray(p_i, dtype=float)
    return _kernels.rhs(model.B, model.Bhat, model.delta, p_s, p_i)


def weighted_average(model, p_i, w_m=None):
    """Perron-weighted infected average w_m^T D^-1 p_i.

    This is the scalar that decays monotonically to zero whenever the
    largest reproduction number is below threshold.
    """
    if w_m is None:
        w_m = perron_weights(model)
    return float(np.dot(w_m / model.delta, np.asarray(p_i, dtype=float)))


def perron_weights(model, p_max=None):
    """Left Perron weights of B*(p_max) D^-1, normalized to sum 1.

    Weighting the infected probabilities by these (divided by the
    recovery rates) gives the scalar Lyapunov coordinate whose decay
    certifies global die-out below threshold.
    """
    if p_max is None:
        p_max = extreme_numbers(model).p_max
    dinv = 1.0 / model.delta
    K = ((1.0 - p_max)[:, None] * model.Bhat
         + p_max[:, None] * model.B) * dinv[None, :]
    w = leading_eig(K, irreducible=False).w
    tot = w.sum()
    if tot <= 0:
        raise ConvergenceError("degenerate Perron weights")
    return w / tot


def integrate(model, p_s0, p_i0, t_end=DEFAULT_T_END, dt=DEFAULT_DT,
              stride=None, w_m=None):
    """RK4 trajectory from the given initial condition.

    Samples every `stride` steps (default about every 0.1 time units)
    plus the final state. Stops early once the dynamics are at rest.
    States drifting out of [0, 1] by more than 1e-9 raise RuntimeError.
    """
    require_valid(model)
    p_s0, p_i0 = _validate_initial(model, p_s0, p_i0)
    if t_end <= 0 or dt <= 0:
        raise ValueError("t_end and dt must be positive")
    n_steps = max(1, int(round(t_end / dt)))
    if stride is None:
        stride = max(1, int(round(0.1 / dt)))
    stride = max(1, int(stride))

    max_samples = n_steps // stride + 2
    t_out = np.empty(max_samples)
    s_out = np.empty((max_samples, model.n))
    i_out = np.empty((max_samples, model.n))
    rec, status, step = _kernels.rk4_run(
        model.B, model.Bhat, model.delta, p_s0, p_i0,
        float(dt), n_steps, stride, REST_TOL, t_out, s_out, i_out)
    if status == _kernels.STATUS_GUARD:
        raise RuntimeError(
            "integration left the probability simplex at t=%.6g" % (step * dt))

    times = t_out[:rec].copy()
    p_s = s_out[:rec].copy()
    p_i = i_out[:rec].copy()

    if w_m is None:
        w_m = perron_weights(model)
    weighted = (p_i * (w_m / model.delta)[None, :]).sum(axis=1)
    lam = np.empty(rec)
    for k in range(rec):
        lam[k] = lambda_surface(model, np.clip(p_s[k], 0.0, 1.0),
                                validate=False).lam
    return Trajectory(times=times, p_s=p_s, p_i=p_i,
                      weighted_avg=weighted, lambda_track=lam)


def detect_resurgence(traj):
    """Dip-and-rebound report, or None when the path is monotone enough.

    A resurgence means the peak infected probability first fell below
    half its initial value and later climbed back past ten times the
    lowest point reached.
    """
    m = traj.p_i.max(axis=1)
    m0 = m[0]
    dip_idx = int(np.argmin(m))
    dip = float(m[dip_idx])
    if m0 <= 0 or dip >= 0.5 * m0:
        return None
    threshold = 10.0 * dip
    after = m[dip_idx:]
    hits = np.nonzero(after >= threshold)[0]
    if hits.size == 0:
        return None
    k = dip_idx + int(hits[0])
    if k == 0:
        return None
    # linear interpolation between the bracketing samples
    t0, t1 = traj.times[k - 1], traj.times[k]
    v0, v1 = m[k - 1], m[k]
    frac = 0.0 if v1 == v0 else (threshold - v0) / (v1 - v0)
    t_res = float(t0 + frac * (t1 - t0))
    return ResurgenceReport(initial_peak=float(m0), dip=dip,
                            dip_time=float(traj.times[dip_idx]),
                            resurge_time=t_res)


def simulate(model, p_s0, p_i0, t_end=DEFAULT_T_END, dt=DEFAULT_DT,
             stride=None, ee=None):
    """Integrate and classify the outcome against the known attractors."""
    traj = integrate(model, p_s0, p_i0, t_end=t_end, dt=dt, stride=stride)
    s_fin = traj.p_s[-1]
    i_fin = traj.p_i[-1]
    ds, di = _kernels.rhs(model.B, model.Bhat, model.delta, s_fin, i_fin)
    rest = max(np.max(np.abs(ds)), np.max(np.abs(di)))

    if ee is None:
        ee = solve_ee(model)
    dist = math.inf if ee is None else float(
        np.max(np.abs(i_fin - ee.p_i_star)))

    if np.max(np.abs(i_fin)) <= IFE_STATE_TOL and rest <= REST_TOL:
        kind = OutcomeKind.CONVERGED_IFE
    elif dist <= EE_DIST_TOL:
        kind = OutcomeKind.CONVERGED_EE
    else:
        kind = OutcomeKind.UNDECIDED
    resurgence = detect_resurgence(traj) if kind == OutcomeKind.CONVERGED_EE \
        else None
    outcome = SimOutcome(kind=kind, p_s_final=s_fin, p_i_final=i_fin,
                         ee_distance=dist, horizon=float(traj.times[-1]),
                         resurgence=resurgence)
    return traj, outcome


def _state_at(model, s0, i0, h, substeps=8):
    """One short RK4 hop of length h from (s0, i0), split into substeps."""
    s = s0.copy()
    i = i0.copy()
    if h <= 0:
        return s, i
    dt = h / substeps
    for _ in range(substeps):
        k1s, k1i = _kernels.rhs(model.B, model.Bhat, model.delta, s, i)
        k2s, k2i = _kernels.rhs(model.B, model.Bhat, model.delta,
                                s + 0.5 * dt * k1s, i + 0.5 * dt * k1i)
        k3s, k3i = _kernels.rhs(model.B, model.Bhat, model.delta,
                                s + 0.5 * dt * k2s, i + 0.5 * dt * k2i)
        k4s, k4i = _kernels.rhs(model.B, model.Bhat, model.delta,
                                s + dt * k3s, i + dt * k3i)
        s = s + dt / 6.0 * (k1s + 2 * k2s + 2 * k3s + k4s)
        i = i + dt / 6.0 * (k1i + 2 * k2i + 2 * k3i + k4i)
    return s, i


def crossing_monitor(model, traj):
    """Times where the transverse eigenvalue changes sign.

    Sign changes between consecutive samples are refined by bisection in
    time, re-integrating from the left sample, until the bracket is
    narrower than 1e-6.
    """
    events = []
    lam = traj.lambda_track
    for k in range(1, lam.size):
        a, b = lam[k - 1], lam[k]
        if a == 0.0 or a * b >= 0.0:
            continue
        direction = 1 if b > a else -1
        t_lo, t_hi = float(traj.times[k - 1]), float(traj.times[k])
        s0 = traj.p_s[k - 1]
        i0 = traj.p_i[k - 1]
        base = t_lo
        lo, hi = 0.0, t_hi - t_lo
        while hi - lo > CROSSING_TIME_TOL:
            mid = 0.5 * (lo + hi)
            s_mid, _ = _state_at(model, s0, i0, mid)
            lam_mid = lambda_surface(model, np.clip(s_mid, 0.0, 1.0),
                                     validate=False).lam
            if (lam_mid > 0) == (direction > 0):
                hi = mid
            else:
                lo = mid
        events.append(CrossingEvent(t=base + 0.5 * (lo + hi),
                                    direction=direction))
    return events


@dataclass(frozen=True)
class DRegularCritical:
    d: float
    beta: float
    betahat: float
    delta: float
    xi: dict
    p_crit_closed_form: dict
    p_crit_bisection: float
    width: float
    convention: object


def _closed_form_pcrit(d, r0, r1, beta, betahat):
    denom = r1 - r0
    if denom == 0:
        return None
    xi = (r1 - 1.0 / d) / denom
    base = r0 * d * xi
    if xi <= 0 or base <= 0:
        return None
    p_crit = 1.0 - xi * base ** (-beta / betahat)
    return xi, p_crit


def dregular_pcrit(model, bracket=(0.0, 1.0), width=1e-6, t_end=2000.0,
                   dt=DEFAULT_DT):
    """Critical uniform initial infection on a regular network.

    Below the critical level the infection dies out; above it the
    trajectory settles at the endemic equilibrium. The level is
    bracketed by bisection on the simulated outcome and compared with
    the closed-form candidate under both reproduction-number
    conventions (per-edge rates versus whole-matrix spectral radii).
    """
    params = dregular_check(model)
    if params is None:
        raise ValueError("model is not uniformly weighted d-regular")
    d, beta, betahat, delta = params

    regime = classify_regime(extreme_numbers(model))
    if regime != Regime.BISTABLE:
        raise ValueError(
            "critical level is defined in the bistable regime only, "
            "model is %s" % regime.value)

    xi = {}
    closed = {}
    cf = _closed_form_pcrit(d, beta / delta, betahat / delta, beta, betahat)
    if cf is not None:
        xi["per_edge"], closed["per_edge"] = cf
    cf = _closed_form_pcrit(d, beta * d / delta, betahat * d / delta,
                            beta, betahat)
    if cf is not None:
        xi["matrix"], closed["matrix"] = cf

    ee = solve_ee(model)
    if ee is None:
        raise ValueError("no endemic equilibrium: reinfection subcritical")

    def decide(p_ic):
        horizon = t_end
        for _ in range(4):
            _, out = simulate(model,
                              np.full(model.n, 1.0 - p_ic),
                              np.full(model.n, p_ic),
                              t_end=horizon, dt=dt, stride=10 ** 9, ee=ee)
            if out.kind != OutcomeKind.UNDECIDED:
                return out.kind
            horizon *= 4.0
        raise ConvergenceError(
            "outcome undecided near p_ic=%.8f up to t=%.0f" % (p_ic, horizon))

    lo, hi = float(bracket[0]), float(bracket[1])
    if decide(hi) != OutcomeKind.CONVERGED_EE:
        raise ConvergenceError("upper bracket did not reach the "
                               "endemic equilibrium")
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if decide(mid) == OutcomeKind.CONVERGED_EE:
            hi = mid
        else:
            lo = mid
    p_crit = 0.5 * (lo + hi)

    convention = None
    for name, value in closed.items():
        if abs(value - p_crit) <= 1e-3:
            convention = name
            break
    return DRegularCritical(d=d, beta=beta, betahat=betahat, delta=delta,
                            xi=xi, p_crit_closed_form=closed,
                            p_crit_bisection=p_crit,
                            width=hi - lo, convention=convention)
