"""Equilibria of the averaged dynamics and the invasion boundary.

Healthy points (p^I = 0) form a continuum indexed by the susceptible
profile; each one is classified by the sign of the transverse eigenvalue
lambda_max(B*(p^S) - D). When reinfection is supercritical (r1 > 1) a
unique endemic equilibrium exists and is found by monotone fixed-point
iteration from above. sample_m0 traces the zero level set of the
transverse eigenvalue along rays through the box.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import ImmunityCase, classify_case, require_valid
from .reproduction import extreme_numbers, MARGINAL_BAND
from .spectral import leading_eig, lambda_surface, spectral_radius, ConvergenceError

EE_RESIDUAL_TOL = 1e-12
EE_MAX_ITER = 1_000_000
EE_IDENTITY_TOL = 1e-9
M0_LAMBDA_TOL = 1e-8


class IFELabel(Enum):
    STABLE = "stable"
    UNSTABLE = "unstable"
    MARGINAL = "marginal"


@dataclass(frozen=True)
class EndemicEquilibrium:
    p_i_star: np.ndarray
    residual: float
    ja_lambda: float


@dataclass(frozen=True)
class IFEClassification:
    p_s: np.ndarray
    lam: float
    label: IFELabel


@dataclass(frozen=True)
class M0Sample:
    anchor: np.ndarray
    points: list
    lambdas: np.ndarray
    rays: int


def solve_ee(model, r1=None):
    """Endemic equilibrium, or None when reinfection is subcritical.

    Iterates p <- (Bhat p) / (delta + Bhat p) from the all-ones vector.
    The map is monotone, so iterates decrease componentwise toward the
    fixed point whenever r1 > 1.
    """
    require_valid(model)
    if r1 is None:
        dinv = 1.0 / model.delta
        r1 = spectral_radius(model.Bhat * dinv[None, :])
    if r1 <= 1.0:
        return None
    p = np.ones(model.n)
    for _ in range(EE_MAX_ITER):
        force = model.Bhat @ p
        p_next = force / (model.delta + force)
        residual = np.max(np.abs(p_next - p))
        p = p_next
        if residual <= EE_RESIDUAL_TOL:
            break
    else:
        raise ConvergenceError(
            "endemic fixed point not settled after %d iterations "
            "(residual %.3e)" % (EE_MAX_ITER, residual))
    ja = _attractor_jacobian(model, p)
    lam = leading_eig(ja).lambda_max
    return EndemicEquilibrium(p_i_star=p, residual=float(residual),
                              ja_lambda=float(lam))


def _attractor_jacobian(model, p_star):
    """Jacobian of the reinfection-only flow at the endemic point."""
    force = model.Bhat @ p_star
    return (model.Bhat
            - np.diag(model.delta)
            - p_star[:, None] * model.Bhat
            - np.diag(force))


def ee_stability(model, ee):
    """Check the endemic point: identity residual and local stability.

    The Jacobian satisfies Ja p* = -diag(Bhat p*) p* exactly; its leading
    eigenvalue is negative at a valid endemic equilibrium.
    """
    p = ee.p_i_star
    ja = _attractor_jacobian(model, p)
    force = model.Bhat @ p
    identity_gap = np.max(np.abs(ja @ p + force * p))
    if identity_gap > EE_IDENTITY_TOL:
        raise AssertionError(
            "endemic Jacobian identity violated: gap %.3e" % identity_gap)
    lam = leading_eig(ja).lambda_max
    return float(lam), bool(lam < 0.0)


def classify_ife_point(model, p_s):
    """Stability of the healthy point with susceptible profile p_s."""
    lv = lambda_surface(model, np.asarray(p_s, dtype=float))
    lam = lv.lam
    if abs(lam) <= MARGINAL_BAND:
        label = IFELabel.MARGINAL
    elif lam < 0.0:
        label = IFELabel.STABLE
    else:
        label = IFELabel.UNSTABLE
    return IFEClassification(p_s=lv.p, lam=float(lam), label=label)


def _ray_endpoints(p_min, rays):
    """Deterministic endpoints on the boundary facets opposite the anchor.

    The first endpoint is the corner opposite the anchor; the rest pin
    one coordinate to its opposite face and spread the others with a
    Kronecker low-discrepancy sequence.
    """
    n = p_min.size
    opposite = 1.0 - p_min
    endpoints = [opposite.copy()]
    if rays == 1:
        return endpoints
    # generalized golden ratio gives well-spread irrational increments
    phi = 2.0
    for _ in range(32):
        phi = (1.0 + phi) ** (1.0 / (n + 1.0))
    alphas = np.array([phi ** -(k + 1) for k in range(n)])
    for i in range(1, rays):
        pt = np.mod(0.5 + i * alphas, 1.0)
        j = (i - 1) % n
        pt[j] = opposite[j]
        endpoints.append(pt)
    return endpoints


def sample_m0(model, rays=32):
    """Points on the zero set of the transverse eigenvalue.

    Casts rays from the minimizing corner toward the opposite boundary
    and bisects each sign change. The eigenvalue is nondecreasing along
    these rays for every immunity case with a certified corner; strong
    mixed immunity has no such corner and is rejected.
    """
    require_valid(model)
    case = classify_case(model)
    if case == ImmunityCase.MIXED_STRONG:
        raise ValueError(
            "ray sampling needs a certified minimizing corner; "
            "strong mixed immunity does not have one")
    rs = extreme_numbers(model)
    anchor = rs.p_min
    lam_anchor = lambda_surface(model, anchor).lam
    points = []
    lambdas = []
    for end in _ray_endpoints(anchor, rays):
        lam_lo = lam_anchor
        lam_hi = lambda_surface(model, end).lam
        if lam_lo > M0_LAMBDA_TOL or lam_hi < -M0_LAMBDA_TOL:
            continue
        lo, hi = 0.0, 1.0
        pt = None
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            p_mid = anchor + mid * (end - anchor)
            lam_mid = lambda_surface(model, p_mid).lam
            if abs(lam_mid) <= M0_LAMBDA_TOL:
                pt = (p_mid, lam_mid)
                break
            if lam_mid < 0.0:
                lo = mid
            else:
                hi = mid
        if pt is not None:
            points.append(pt[0])
            lambdas.append(pt[1])
    return M0Sample(anchor=anchor, points=points,
                    lambdas=np.array(lambdas), rays=rays)
