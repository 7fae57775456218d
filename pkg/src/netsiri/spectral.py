"""Leading-eigenvalue machinery for Metzler matrices.

Everything downstream (reproduction numbers, regime classification,
stability of infection-free points) reduces to the real leading
eigenvalue of a Metzler matrix and its positive left/right eigenvectors.
Computed with shifted power iteration: shifting by 1 + max |k_jj| makes
the matrix nonnegative with a positive diagonal, so the iteration is
primitive whenever the matrix is irreducible and converges to the
Perron pair.
"""

from dataclasses import dataclass

import numpy as np

from .model import require_valid

MAX_ITER = 100_000
RAYLEIGH_TOL = 1e-12
RESIDUAL_TOL = 1e-10


class ConvergenceError(RuntimeError):
    """Power iteration hit the iteration cap without meeting tolerance."""


@dataclass(frozen=True)
class SpectralTriple:
    """Leading eigenvalue with right (v) and left (w) eigenvectors.

    Normalization: ||v||_1 = 1 and w^T v = 1.
    """

    lambda_max: float
    v: np.ndarray
    w: np.ndarray


@dataclass(frozen=True)
class LambdaValue:
    p: np.ndarray
    lam: float
    triple: SpectralTriple


def _check_metzler(K):
    off = K - np.diag(np.diag(K))
    if np.any(off < 0):
        raise ValueError("matrix is not Metzler (negative off-diagonal entry)")


def _power_vector(M, norm_inf):
    """Power iteration on a nonnegative matrix from the uniform vector.

    Returns (eigenvalue estimate, vector with ||.||_1 = 1). The estimate
    is the mean growth 1^T M v since v stays nonnegative. Convergence
    requires both a settled Rayleigh quotient and a small residual.
    """
    n = M.shape[0]
    v = np.full(n, 1.0 / n)
    lam = float(np.sum(M @ v))
    for _ in range(MAX_ITER):
        Mv = M @ v
        s = Mv.sum()
        if s <= 0.0:
            # M annihilates v (possible for reducible nilpotent blocks);
            # the leading eigenvalue of the nonnegative matrix is 0 here
            return 0.0, v
        v_next = Mv / s
        lam_next = float(np.dot(np.ones(n), M @ v_next))
        settled = abs(lam_next - lam) <= RAYLEIGH_TOL * (1.0 + abs(lam_next))
        v, lam = v_next, lam_next
        if settled:
            residual = np.max(np.abs(M @ v - lam * v))
            if residual <= RESIDUAL_TOL * max(norm_inf, 1e-300):
                return lam, v
    raise ConvergenceError(
        f"power iteration did not converge within {MAX_ITER} iterations"
    )


def leading_eig(K, irreducible=True):
    """Leading eigenpair of a Metzler matrix K.

    Shifts K by sigma = 1 + max |k_jj| so K + sigma*I is nonnegative,
    runs power iteration for the right vector and on the transpose for
    the left vector, then subtracts the shift. For irreducible input the
    eigenvectors are strictly positive; reducible input (allowed when
    the flag is off) may produce vectors with zero entries and the
    normalization falls back to ||v||_1 = 1 alone if w^T v = 0.
    """
    K = np.asarray(K, dtype=float)
    _check_metzler(K)
    n = K.shape[0]
    if n == 1:
        return SpectralTriple(float(K[0, 0]), np.array([1.0]), np.array([1.0]))

    sigma = 1.0 + np.max(np.abs(np.diag(K)))
    M = K + sigma * np.eye(n)
    norm_inf = np.max(np.abs(K).sum(axis=1))

    lam_r, v = _power_vector(M, norm_inf)
    lam_l, w = _power_vector(M.T, norm_inf)
    lam = 0.5 * (lam_r + lam_l) - sigma

    wv = float(np.dot(w, v))
    if wv > 0:
        w = w / wv
    return SpectralTriple(float(lam), v, w)


def spectral_radius(M):
    """Spectral radius of an entrywise nonnegative matrix."""
    M = np.asarray(M, dtype=float)
    if np.any(M < 0):
        raise ValueError("spectral_radius expects a nonnegative matrix")
    return leading_eig(M, irreducible=False).lambda_max


def effective_infection_matrix(model, p):
    """Susceptibility-weighted infection matrix.

    Row j interpolates between the reinfection row (p_j = 0, everyone
    recovered) and the first-infection row (p_j = 1, everyone still
    susceptible).
    """
    p = np.asarray(p, dtype=float)
    if np.any(p < 0) or np.any(p > 1):
        raise ValueError("p must lie in [0, 1]^n")
    return (1.0 - p)[:, None] * model.Bhat + p[:, None] * model.B


def lambda_surface(model, p, validate=True):
    """Leading transverse eigenvalue at the infection-free point p.

    The sign classifies p: negative means local stability of the
    infection-free state, positive means an epidemic can take hold.
    """
    if validate:
        require_valid(model)
    J = effective_infection_matrix(model, p) - np.diag(model.delta)
    triple = leading_eig(J, irreducible=False)
    return LambdaValue(p=np.asarray(p, dtype=float), lam=triple.lambda_max,
                       triple=triple)


def grad_lambda(model, p, validate=True):
    """Analytic gradient of the transverse eigenvalue surface.

    With w^T v = 1 the derivative with respect to p_j is
    w_j * ((B - Bhat) v)_j, so stubborn agents contribute exact zeros.
    """
    lv = lambda_surface(model, p, validate=validate)
    v, w = lv.triple.v, lv.triple.w
    return w * ((model.B - model.Bhat) @ v)
