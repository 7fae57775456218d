"""Reproduction numbers and behavioral regime classification.

Four numbers summarize a model. r0 and r1 are the spectral radii of
B D^-1 and Bhat D^-1. rmin and rmax extremize rho(B*(p) D^-1) over all
susceptibility profiles p in [0,1]^n; for every case except strong
mixed immunity the extremizers sit at corners given in closed form, and
for the strong mixed case a multi-start projected gradient search is
used instead (flagged as non-certified).
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import ImmunityCase, classify_case, bound_matrices, require_valid, RATE_TOL
from .spectral import leading_eig, spectral_radius

# Comparisons against 1 within this band are surfaced as Marginal
# instead of being silently resolved either way.
MARGINAL_BAND = 1e-9

# Projected gradient settings for the strong mixed case.
_PG_STEP = 0.1
_PG_GRAD_TOL = 1e-10
_PG_MAX_ITER = 500


class Regime(Enum):
    INFECTION_FREE = "InfectionFree"
    ENDEMIC = "Endemic"
    EPIDEMIC = "Epidemic"
    BISTABLE = "Bistable"
    MARGINAL = "Marginal"


@dataclass(frozen=True)
class ReproductionSet:
    r0: float
    r1: float
    rmin: float
    rmax: float
    p_min: np.ndarray
    p_max: np.ndarray
    rbar_min: float
    rbar_max: float
    exact: bool


def basic_numbers(model):
    """r0 = rho(B D^-1) and r1 = rho(Bhat D^-1)."""
    dinv = 1.0 / model.delta
    r0 = spectral_radius(model.B * dinv[None, :])
    r1 = spectral_radius(model.Bhat * dinv[None, :])
    return r0, r1


def _rho_at(model, p):
    """rho(B*(p) D^-1), the p-dependent reproduction number."""
    dinv = 1.0 / model.delta
    Bstar = (1.0 - p)[:, None] * model.Bhat + p[:, None] * model.B
    return spectral_radius(Bstar * dinv[None, :])


def _scaled_gradient(model, p):
    """Gradient of p -> rho(B*(p) D^-1).

    Identical in form to the transverse-eigenvalue gradient but with
    both rate matrices postmultiplied by D^-1: diag(w) (B - Bhat) D^-1 v
    with (w, v) the leading pair of B*(p) D^-1, w^T v = 1.
    """
    dinv = 1.0 / model.delta
    Bs = model.B * dinv[None, :]
    Bhs = model.Bhat * dinv[None, :]
    K = (1.0 - p)[:, None] * Bhs + p[:, None] * Bs
    triple = leading_eig(K, irreducible=False)
    return triple.w * ((Bs - Bhs) @ triple.v)


def _projected_gradient_extremum(model, p0, sign):
    """Ascend (sign=+1) or descend (sign=-1) rho(B*(p) D^-1) over the box."""
    p = p0.astype(float).copy()
    val = _rho_at(model, p)
    for _ in range(_PG_MAX_ITER):
        g = sign * _scaled_gradient(model, p)
        # project: freeze coordinates pushing outside the box
        g_proj = g.copy()
        g_proj[(p <= 0.0) & (g < 0)] = 0.0
        g_proj[(p >= 1.0) & (g > 0)] = 0.0
        gnorm = np.max(np.abs(g_proj))
        if gnorm <= _PG_GRAD_TOL:
            break
        step = _PG_STEP / gnorm
        improved = False
        while step * gnorm > 1e-14:
            cand = np.clip(p + step * g_proj, 0.0, 1.0)
            cand_val = _rho_at(model, cand)
            if sign * (cand_val - val) > 0:
                p, val = cand, cand_val
                improved = True
                break
            step *= 0.5
        if not improved:
            break
    return p, val


def _corner_starts(n, rng_seed=20240601):
    if n <= 12:
        corners = np.zeros((2 ** n, n))
        for idx in range(2 ** n):
            for j in range(n):
                corners[idx, j] = (idx >> j) & 1
        return corners
    rng = np.random.default_rng(rng_seed)
    return rng.integers(0, 2, size=(64, n)).astype(float)


def extreme_numbers(model):
    """Full reproduction set with extremizers and outer bounds."""
    require_valid(model)
    n = model.n
    r0, r1 = basic_numbers(model)
    case = classify_case(model)

    bounds = bound_matrices(model)
    dinv = 1.0 / model.delta
    rbar_max = spectral_radius(bounds.Bmax * dinv[None, :])
    rbar_min = spectral_radius(bounds.Bmin * dinv[None, :])

    exact = True
    if case in (ImmunityCase.SIR, ImmunityCase.PARTIAL):
        p_max = np.ones(n)
        p_min = np.zeros(n)
        rmax, rmin = r0, r1
    elif case == ImmunityCase.COMPROMISED:
        p_max = np.zeros(n)
        p_min = np.ones(n)
        rmax, rmin = r1, r0
    elif case in (ImmunityCase.SIS, ImmunityCase.SI):
        p_max = np.zeros(n)
        p_min = np.zeros(n)
        rmax = rmin = r0
    elif case == ImmunityCase.MIXED_WEAK:
        # per-row corner: rows where beta dominates take p=1 in the
        # maximizer and p=0 in the minimizer; dominated rows flip;
        # stubborn rows are flat and fixed to 0 by convention
        edge = model.graph.adjacency > 0
        p_max = np.zeros(n)
        p_min = np.zeros(n)
        for j in range(n):
            d = model.B[j, edge[j]] - model.Bhat[j, edge[j]]
            if np.any(d > RATE_TOL):
                p_max[j] = 1.0
            elif np.any(d < -RATE_TOL):
                p_min[j] = 1.0
        rmax = _rho_at(model, p_max)
        rmin = _rho_at(model, p_min)
    else:
        # strong mixed immunity: no certified corner, search instead
        exact = False
        best_max = (None, -np.inf)
        best_min = (None, np.inf)
        for corner in _corner_starts(n):
            pm, vm = _projected_gradient_extremum(model, corner, +1)
            if vm > best_max[1]:
                best_max = (pm, vm)
            pn, vn = _projected_gradient_extremum(model, corner, -1)
            if vn < best_min[1]:
                best_min = (pn, vn)
        p_max, rmax = best_max
        p_min, rmin = best_min

    return ReproductionSet(
        r0=float(r0), r1=float(r1), rmin=float(rmin), rmax=float(rmax),
        p_min=p_min, p_max=p_max,
        rbar_min=float(rbar_min), rbar_max=float(rbar_max), exact=exact,
    )


def classify_regime(rs):
    """Map a reproduction set to its behavioral regime.

    The deciding comparisons are against 1; anything within the marginal
    band is reported as Marginal rather than resolved silently.
    """
    if abs(rs.rmax - 1.0) <= MARGINAL_BAND:
        return Regime.MARGINAL
    if rs.rmax < 1.0:
        return Regime.INFECTION_FREE
    if abs(rs.rmin - 1.0) <= MARGINAL_BAND:
        return Regime.MARGINAL
    if rs.rmin > 1.0:
        return Regime.ENDEMIC
    # now rmax > 1 > rmin; r1 decides epidemic vs bistable
    if abs(rs.r1 - 1.0) <= MARGINAL_BAND:
        return Regime.MARGINAL
    return Regime.BISTABLE if rs.r1 > 1.0 else Regime.EPIDEMIC
