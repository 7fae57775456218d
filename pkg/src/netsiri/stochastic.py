"""Event-driven simulation of the underlying Markov chain.

Direct Gillespie method: at each step every susceptible agent carries
the total infection hazard from its currently infected neighbors, every
infected agent its recovery hazard, and every recovered agent the
reinfection hazard. The next event time is exponential in the summed
hazard and the event is drawn proportionally. Small networks only; the
point is validating the mean-field trajectories, not scale.

Rate matrices are taken as given here (zero coupling is a legitimate
calibration setting), so callers wanting full model validation run it
themselves.
"""

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

S = 0
I = 1
R = 2


class AgentState(IntEnum):
    SUSCEPTIBLE = S
    INFECTED = I
    RECOVERED = R


_GENERATORS = {
    "pcg64": np.random.PCG64,
    "philox": np.random.Philox,
}


def make_rng(seed, generator="pcg64"):
    try:
        bitgen = _GENERATORS[generator.lower()]
    except KeyError:
        raise ValueError("unknown generator %r (have: %s)"
                         % (generator, ", ".join(sorted(_GENERATORS))))
    return np.random.Generator(bitgen(seed))


@dataclass(frozen=True)
class EventTrace:
    times: np.ndarray
    agents: np.ndarray
    new_states: np.ndarray
    initial: np.ndarray
    final: np.ndarray
    t_end: float
    seed: int
    generator: str


@dataclass(frozen=True)
class MCEstimate:
    t_grid: np.ndarray
    p_i_hat: np.ndarray
    stderr: np.ndarray
    trials: int
    seed: int
    generator: str


def _hazards(model, states, out):
    infected = states == I
    fb = model.B[:, infected].sum(axis=1)
    fh = model.Bhat[:, infected].sum(axis=1)
    out[states == S] = fb[states == S]
    out[infected] = model.delta[infected]
    out[states == R] = fh[states == R]
    return out


def _run(model, states, t_end, rng):
    n = model.n
    states = states.copy()
    hazards = np.empty(n)
    times = []
    agents = []
    new_states = []
    t = 0.0
    while True:
        if not np.any(states == I):
            break
        _hazards(model, states, hazards)
        total = hazards.sum()
        if total <= 0.0:
            break
        t += rng.exponential(1.0 / total)
        if t > t_end:
            break
        u = rng.random() * total
        j = int(np.searchsorted(np.cumsum(hazards), u))
        j = min(j, n - 1)
        states[j] = I if states[j] != I else R
        times.append(t)
        agents.append(j)
        new_states.append(states[j])
    return (np.array(times), np.array(agents, dtype=int),
            np.array(new_states, dtype=int), states)


def gillespie_run(model, initial, t_end, seed, generator="pcg64"):
    """One exact trace of the agent-state Markov chain.

    Stops at t_end or in an absorbing infection-free configuration.
    The same (model, initial, t_end, seed, generator) always reproduces
    the same trace.
    """
    initial = np.asarray(initial, dtype=int)
    if initial.shape != (model.n,):
        raise ValueError("initial states must have length %d" % model.n)
    if np.any((initial < S) | (initial > R)):
        raise ValueError("states must be 0 (S), 1 (I) or 2 (R)")
    rng = make_rng(seed, generator)
    times, agents, new_states, final = _run(model, initial, t_end, rng)
    return EventTrace(times=times, agents=agents, new_states=new_states,
                      initial=initial.copy(), final=final, t_end=float(t_end),
                      seed=int(seed), generator=generator)


def _sample_initial(p_s0, p_i0, rng):
    u = rng.random(p_s0.size)
    states = np.full(p_s0.size, R, dtype=int)
    states[u < p_s0 + p_i0] = I
    states[u < p_s0] = S
    return states


def monte_carlo_mean(model, p_s0, p_i0, t_grid, trials, seed,
                     generator="pcg64"):
    """Empirical per-agent infection probabilities on a time grid.

    Trial i draws its own generator from seed + i, samples initial
    agent states independently from (p_s0, p_i0, remainder), runs one
    trace and bins it. Standard errors use the binomial formula.
    """
    p_s0 = np.asarray(p_s0, dtype=float)
    p_i0 = np.asarray(p_i0, dtype=float)
    t_grid = np.asarray(t_grid, dtype=float)
    if trials < 1:
        raise ValueError("need at least one trial")
    if np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be nondecreasing")
    t_end = float(t_grid.max())
    counts = np.zeros((t_grid.size, model.n))
    for trial in range(trials):
        rng = make_rng(seed + trial, generator)
        states = _sample_initial(p_s0, p_i0, rng)
        times, agents, new_states, _ = _run(model, states, t_end, rng)
        # replay the trace over the grid
        cur = states.copy()
        ev = 0
        for gi, tg in enumerate(t_grid):
            while ev < times.size and times[ev] <= tg:
                cur[agents[ev]] = new_states[ev]
                ev += 1
            counts[gi] += cur == I
    p_hat = counts / trials
    stderr = np.sqrt(p_hat * (1.0 - p_hat) / trials)
    return MCEstimate(t_grid=t_grid, p_i_hat=p_hat, stderr=stderr,
                      trials=int(trials), seed=int(seed), generator=generator)
