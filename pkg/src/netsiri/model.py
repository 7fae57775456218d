"""Network model for SIRI contagion on weighted digraphs.

A model couples a strongly connected digraph with three rate families:
first-infection rates beta_jk on each edge, reinfection rates
betahat_jk on the same edges, and per-agent recovery rates delta_j.
Edge (j, k) means agent j can be infected by agent k, so row j of the
rate matrices collects everything that can happen TO agent j.

The relation between beta and betahat on each row decides how an agent's
susceptibility changes after recovery, and the entrywise comparison of
the two matrices sorts every model into one of seven immunity cases,
from plain SIS (nothing changes) to strong mixed immunity (rows that
mix increased and decreased susceptibility).
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

# Absolute tolerance for rate-equality tests. Rates are user-supplied
# exact values, not computed quantities, so this only guards round-trip
# noise from serialization.
RATE_TOL = 1e-12


class ImmunityCase(Enum):
    SI = "SI"
    SIR = "SIR"
    SIS = "SIS"
    PARTIAL = "Partial"
    COMPROMISED = "Compromised"
    MIXED_WEAK = "MixedWeak"
    MIXED_STRONG = "MixedStrong"


@dataclass(frozen=True)
class DiGraph:
    """Weighted digraph on n agents, a_jk > 0 iff edge (j, k) exists."""

    n: int
    adjacency: np.ndarray

    def __post_init__(self):
        adj = np.asarray(self.adjacency, dtype=float)
        if adj.shape != (self.n, self.n):
            raise ValueError(f"adjacency must be {self.n}x{self.n}, got {adj.shape}")
        object.__setattr__(self, "adjacency", adj)

    def neighbors(self, j):
        """Indices k with a_jk > 0, the agents that can infect j."""
        return np.nonzero(self.adjacency[j] > 0)[0]

    def out_degrees(self):
        """Weighted row sums of the adjacency."""
        return self.adjacency.sum(axis=1)

    def strongly_connected(self):
        ncomp, _ = connected_components(
            csr_matrix(self.adjacency > 0), connection="strong"
        )
        return ncomp == 1


@dataclass(frozen=True)
class RateParams:
    """Infection matrix B, reinfection matrix Bhat, recovery rates delta."""

    B: np.ndarray
    Bhat: np.ndarray
    delta: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "B", np.asarray(self.B, dtype=float))
        object.__setattr__(self, "Bhat", np.asarray(self.Bhat, dtype=float))
        object.__setattr__(self, "delta", np.asarray(self.delta, dtype=float))


@dataclass(frozen=True)
class NetworkModel:
    graph: DiGraph
    rates: RateParams

    @property
    def n(self):
        return self.graph.n

    @property
    def B(self):
        return self.rates.B

    @property
    def Bhat(self):
        return self.rates.Bhat

    @property
    def delta(self):
        return self.rates.delta


@dataclass(frozen=True)
class BoundMatrices:
    """Entrywise envelope of B and Bhat."""

    Bmax: np.ndarray
    Bmin: np.ndarray


def make_model(adjacency, B, Bhat, delta):
    """Convenience constructor from plain arrays."""
    adjacency = np.asarray(adjacency, dtype=float)
    n = adjacency.shape[0]
    return NetworkModel(
        graph=DiGraph(n=n, adjacency=adjacency),
        rates=RateParams(B=B, Bhat=Bhat, delta=delta),
    )


def bound_matrices(model):
    B, Bhat = model.B, model.Bhat
    return BoundMatrices(Bmax=np.maximum(B, Bhat), Bmin=np.minimum(B, Bhat))


def validate_model(model):
    """Check every structural assumption; returns a list of violations.

    An empty list means the model is ok. Violations are data, not
    exceptions, so callers can report all of them at once.
    """
    violations = []
    g, r = model.graph, model.rates
    n = g.n
    A = g.adjacency

    if n < 1:
        violations.append("agent count must be >= 1")
        return violations
    if A.shape != (n, n) or r.B.shape != (n, n) or r.Bhat.shape != (n, n):
        violations.append("matrix shapes inconsistent with agent count")
        return violations
    if r.delta.shape != (n,):
        violations.append("delta must be a length-n vector")
        return violations

    if np.any(A < 0):
        violations.append("adjacency weights must be nonnegative")
    if np.any(np.diag(A) != 0):
        violations.append("self-loops not allowed (a_jj must be 0)")
    if not g.strongly_connected():
        violations.append("not strongly connected")

    edge = A > 0
    if np.any(r.B < 0) or np.any(r.Bhat < 0):
        violations.append("rates must be nonnegative")
    if np.any((r.B > 0) != edge):
        violations.append("beta_jk > 0 must hold exactly on edges")
    bhat_zero = not np.any(r.Bhat > RATE_TOL)
    if not bhat_zero:
        # nonzero Bhat must live exactly on the edge set, else the
        # reinfection graph is reducible and out of scope
        if np.any(r.Bhat[~edge] != 0):
            violations.append("betahat_jk must vanish off the edge set")
        elif np.any(r.Bhat[edge] <= 0):
            violations.append(
                "reducible reinfection matrix: betahat must be positive on "
                "every edge or identically zero"
            )
    if np.any(r.delta <= 0):
        violations.append("D singular: recovery rates must be positive")

    return violations


def require_valid(model):
    """Raise ValueError listing violations unless the model validates."""
    violations = validate_model(model)
    if violations:
        raise ValueError("invalid model: " + "; ".join(violations))


def classify_case(model):
    """Sort the model into its immunity case.

    Precedence follows the case table: SI, SIR, and SIS are checked
    first, then the uniform strict orderings, then the per-row sign
    test that separates weak from strong mixing.
    """
    edge = model.graph.adjacency > 0
    beta = model.B[edge]
    bhat = model.Bhat[edge]

    if np.all(np.abs(model.delta) <= RATE_TOL):
        return ImmunityCase.SI
    if np.all(bhat <= RATE_TOL):
        return ImmunityCase.SIR
    diff = beta - bhat
    if np.all(np.abs(diff) <= RATE_TOL):
        return ImmunityCase.SIS
    if np.all(diff > RATE_TOL) and np.all(bhat > RATE_TOL):
        return ImmunityCase.PARTIAL
    if np.all(-diff > RATE_TOL) and np.all(beta > RATE_TOL):
        return ImmunityCase.COMPROMISED

    row_uniform = True
    for j in range(model.n):
        nbrs = edge[j]
        d = model.B[j, nbrs] - model.Bhat[j, nbrs]
        if np.any(d > RATE_TOL) and np.any(d < -RATE_TOL):
            row_uniform = False
            break
    return ImmunityCase.MIXED_WEAK if row_uniform else ImmunityCase.MIXED_STRONG


def stubborn_agents(model):
    """Agents whose infection and reinfection rates agree on every in-edge."""
    edge = model.graph.adjacency > 0
    out = set()
    for j in range(model.n):
        nbrs = edge[j]
        if np.all(np.abs(model.B[j, nbrs] - model.Bhat[j, nbrs]) <= RATE_TOL):
            out.add(j)
    return out


def dregular_check(model):
    """Detect the homogeneous d-regular parameterization.

    Returns (d, beta, betahat, delta) when the adjacency has equal
    weighted row sums d, B = beta*A, Bhat = betahat*A, and D = delta*I.
    Returns None for any heterogeneity.
    """
    A = model.graph.adjacency
    edge = A > 0

    degrees = A.sum(axis=1)
    d = degrees[0]
    if not np.all(np.abs(degrees - d) <= RATE_TOL):
        return None

    delta = model.delta[0]
    if not np.all(np.abs(model.delta - delta) <= RATE_TOL):
        return None

    ratios_b = model.B[edge] / A[edge]
    beta = ratios_b[0]
    if not np.all(np.abs(ratios_b - beta) <= RATE_TOL):
        return None

    ratios_h = model.Bhat[edge] / A[edge]
    betahat = ratios_h[0]
    if not np.all(np.abs(ratios_h - betahat) <= RATE_TOL):
        return None

    return float(d), float(beta), float(betahat), float(delta)
