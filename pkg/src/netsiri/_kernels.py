"""Fixed-step RK4 integration kernel.

Compiled with numba when available; a plain Python mirror keeps the
package importable without it. The kernel records every stride-th step
plus the final state and enforces the simplex guard: coordinates are
clamped back into [0, 1] when they drift out by at most CLAMP_EPS and
flagged as violations past GUARD_EPS.
"""

import numpy as np

try:
    from numba import njit
    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(**kwargs):
        def wrap(fn):
            return fn
        return wrap

CLAMP_EPS = 1e-12
GUARD_EPS = 1e-9

STATUS_DONE = 0
STATUS_EARLY_STOP = 1
STATUS_GUARD = 2


@njit(cache=True)
def _rhs_into(B, Bhat, delta, s, i, ds, di):
    n = s.shape[0]
    for j in range(n):
        fb = 0.0
        fh = 0.0
        for k in range(n):
            fb += B[j, k] * i[k]
            fh += Bhat[j, k] * i[k]
        ds[j] = -s[j] * fb
        di[j] = (1.0 - s[j] - i[j]) * fh + s[j] * fb - delta[j] * i[j]


@njit(cache=True)
def _guard_state(s, i):
    n = s.shape[0]
    for j in range(n):
        if s[j] < 0.0:
            if s[j] < -GUARD_EPS:
                return STATUS_GUARD
            if s[j] >= -CLAMP_EPS:
                s[j] = 0.0
        elif s[j] > 1.0:
            if s[j] > 1.0 + GUARD_EPS:
                return STATUS_GUARD
            if s[j] <= 1.0 + CLAMP_EPS:
                s[j] = 1.0
        if i[j] < 0.0:
            if i[j] < -GUARD_EPS:
                return STATUS_GUARD
            if i[j] >= -CLAMP_EPS:
                i[j] = 0.0
        elif i[j] > 1.0:
            if i[j] > 1.0 + GUARD_EPS:
                return STATUS_GUARD
            if i[j] <= 1.0 + CLAMP_EPS:
                i[j] = 1.0
        if s[j] + i[j] > 1.0 + GUARD_EPS:
            return STATUS_GUARD
    return STATUS_DONE


@njit(cache=True)
def rk4_run(B, Bhat, delta, s0, i0, dt, n_steps, stride, stop_tol,
            t_out, s_out, i_out):
    """Integrate n_steps of RK4; returns (samples, status, steps_taken)."""
    n = s0.shape[0]
    s = s0.copy()
    i = i0.copy()
    k1s = np.empty(n)
    k1i = np.empty(n)
    k2s = np.empty(n)
    k2i = np.empty(n)
    k3s = np.empty(n)
    k3i = np.empty(n)
    k4s = np.empty(n)
    k4i = np.empty(n)
    ts = np.empty(n)
    ti = np.empty(n)

    t_out[0] = 0.0
    s_out[0, :] = s
    i_out[0, :] = i
    rec = 1
    last_recorded = 0
    status = STATUS_DONE
    step = 0
    while step < n_steps:
        _rhs_into(B, Bhat, delta, s, i, k1s, k1i)
        rmax = 0.0
        for j in range(n):
            a = abs(k1s[j])
            if a > rmax:
                rmax = a
            a = abs(k1i[j])
            if a > rmax:
                rmax = a
        if rmax <= stop_tol:
            status = STATUS_EARLY_STOP
            break
        h = dt
        for j in range(n):
            ts[j] = s[j] + 0.5 * h * k1s[j]
            ti[j] = i[j] + 0.5 * h * k1i[j]
        _rhs_into(B, Bhat, delta, ts, ti, k2s, k2i)
        for j in range(n):
            ts[j] = s[j] + 0.5 * h * k2s[j]
            ti[j] = i[j] + 0.5 * h * k2i[j]
        _rhs_into(B, Bhat, delta, ts, ti, k3s, k3i)
        for j in range(n):
            ts[j] = s[j] + h * k3s[j]
            ti[j] = i[j] + h * k3i[j]
        _rhs_into(B, Bhat, delta, ts, ti, k4s, k4i)
        for j in range(n):
            s[j] += h / 6.0 * (k1s[j] + 2.0 * k2s[j] + 2.0 * k3s[j] + k4s[j])
            i[j] += h / 6.0 * (k1i[j] + 2.0 * k2i[j] + 2.0 * k3i[j] + k4i[j])
        if _guard_state(s, i) != STATUS_DONE:
            status = STATUS_GUARD
            break
        step += 1
        if step % stride == 0:
            t_out[rec] = step * dt
            s_out[rec, :] = s
            i_out[rec, :] = i
            last_recorded = step
            rec += 1
    if status != STATUS_GUARD and last_recorded != step:
        t_out[rec] = step * dt
        s_out[rec, :] = s
        i_out[rec, :] = i
        rec += 1
    return rec, status, step


def rhs(B, Bhat, delta, s, i):
    """Vectorized right-hand side, used outside the hot loop."""
    fb = B @ i
    fh = Bhat @ i
    ds = -s * fb
    di = (1.0 - s - i) * fh + s * fb - delta * i
    return ds, di
