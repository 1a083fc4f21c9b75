"""Finite-state Markov chains in discrete and continuous time.

Discrete chains are row-stochastic matrices T with T[i, j] = P(j | i), acting
on row vectors: p_{t+1} = p_t T.  Continuous chains are nonnegative rate
matrices W with zero diagonal; the master equation

    dp_t(x)/dt = sum_x' [ p_t(x') W[x', x] - p_t(x) W[x, x'] ]

is integrated with a fixed-step classical 4th-order scheme.  Measure
families evolve by the same linear recursion as distributions, without any
normalization, which is what makes the monotone functionals downstream
well-defined.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadParamsError,
    DimensionMismatchError,
    NonErgodicError,
    NotStationaryError,
    UnstableStepError,
    ZeroProbabilityError,
)

__all__ = [
    "Distribution",
    "StochasticMatrix",
    "RateMatrix",
    "MeasureFamily",
    "BalanceReport",
    "stationary_distribution",
    "evolve_distribution",
    "evolve_measures",
    "integrate_master_equation",
    "check_balance",
    "backward_matrix",
    "build_example_chain",
]

#: Construction-time tolerance on normalization invariants.
NORMALIZATION_ATOL = 1e-12

#: Largest state space solved by direct elimination; larger chains fall back
#: to power iteration.
DIRECT_SOLVE_MAX = 64

POWER_ITERATION_CAP = 200_000


def _freeze(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Distribution:
    """Probability vector over a finite state space."""

    probs: np.ndarray

    def __post_init__(self) -> None:
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise BadParamsError("distribution must be a nonempty 1-d vector")
        if np.any(p < 0.0):
            raise BadParamsError("distribution entries must be nonnegative")
        if abs(p.sum() - 1.0) > NORMALIZATION_ATOL:
            raise BadParamsError(
                f"distribution sums to {p.sum()!r}, expected 1 within {NORMALIZATION_ATOL}"
            )
        object.__setattr__(self, "probs", _freeze(p))

    @property
    def n(self) -> int:
        return self.probs.size


@dataclass(frozen=True)
class StochasticMatrix:
    """Row-stochastic transition matrix of a discrete-time chain."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.matrix, dtype=float)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise BadParamsError("transition matrix must be square and nonempty")
        if np.any(t < 0.0) or np.any(t > 1.0):
            raise BadParamsError("transition probabilities must lie in [0, 1]")
        bad = np.abs(t.sum(axis=1) - 1.0) > NORMALIZATION_ATOL
        if np.any(bad):
            raise BadParamsError(f"rows {np.flatnonzero(bad).tolist()} do not sum to 1")
        object.__setattr__(self, "matrix", _freeze(t))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True)
class RateMatrix:
    """Transition rates of a continuous-time chain, zero on the diagonal."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        w = np.asarray(self.matrix, dtype=float)
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] == 0:
            raise BadParamsError("rate matrix must be square and nonempty")
        if np.any(w < 0.0):
            raise BadParamsError("rates must be nonnegative")
        if np.any(np.diag(w) != 0.0):
            raise BadParamsError("rate matrix must have an exactly zero diagonal")
        object.__setattr__(self, "matrix", _freeze(w))

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def generator(self) -> np.ndarray:
        """Generator G = W - diag(exit rates); rows sum to zero."""
        w = self.matrix
        return w - np.diag(w.sum(axis=1))


@dataclass(frozen=True)
class MeasureFamily:
    """A strictly positive reference measure plus k companion measures.

    Stored as a (k+1, n) array whose row 0 is the reference.  Companion
    rows are nonnegative but need not normalize.  `require_positive=False`
    admits zeros in the reference; the functionals that consume such a
    family only accept a zero reference cell when every companion vanishes
    there too.
    """

    measures: np.ndarray
    require_positive: bool = field(default=True)

    def __post_init__(self) -> None:
        m = np.asarray(self.measures, dtype=float)
        if m.ndim != 2 or m.shape[0] < 2 or m.shape[1] == 0:
            raise BadParamsError("need a (k+1, n) array with k >= 1")
        if self.require_positive and np.any(m[0] <= 0.0):
            raise ZeroProbabilityError("reference measure must be strictly positive")
        if np.any(m[0] < 0.0) or np.any(m[1:] < 0.0):
            raise BadParamsError("measures must be nonnegative")
        object.__setattr__(self, "measures", _freeze(m))

    @property
    def k(self) -> int:
        return self.measures.shape[0] - 1

    @property
    def n(self) -> int:
        return self.measures.shape[1]

    @property
    def reference(self) -> np.ndarray:
        return self.measures[0]


@dataclass(frozen=True)
class BalanceReport:
    """Outcome of balance diagnostics for a chain and a candidate law.

    A true `satisfies_detailed_balance` always comes with a true
    `satisfies_global_balance`; detailed balance is the stronger property.
    """

    is_doubly_stochastic: bool
    satisfies_global_balance: bool
    satisfies_detailed_balance: bool
    max_residual: float


Chain = StochasticMatrix | RateMatrix


def _transition_like(chain: Chain) -> np.ndarray:
    """A row-stochastic matrix with the same stationary law as the chain."""
    if isinstance(chain, StochasticMatrix):
        return chain.matrix
    w = chain.matrix
    lam = float(w.sum(axis=1).max())
    if lam == 0.0:
        # No transitions at all; every law is stationary, nothing unique.
        raise NonErgodicError("rate matrix has no transitions")
    return np.eye(chain.n) + chain.generator() / (1.05 * lam)


def _require_strongly_connected(chain: Chain) -> None:
    adj = chain.matrix > 0.0
    n = adj.shape[0]
    for mat in (adj, adj.T):
        seen = np.zeros(n, dtype=bool)
        seen[0] = True
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for j in np.flatnonzero(mat[i] & ~seen):
                seen[j] = True
                queue.append(int(j))
        if not seen.all():
            raise NonErgodicError("chain is reducible")


def stationary_distribution(chain: Chain, tol: float = 1e-12) -> Distribution:
    """Unique stationary law of an irreducible chain.

    Small chains are solved directly from the balance equations with a
    normalization row; larger ones use power iteration on the (uniformized,
    in the continuous case) transition matrix.  Raises NonErgodicError when
    the chain is reducible, the solve is rank-deficient, or iteration fails
    to converge.
    """
    _require_strongly_connected(chain)
    n = chain.n
    if isinstance(chain, StochasticMatrix):
        balance_op = chain.matrix.T - np.eye(n)
    else:
        balance_op = chain.generator().T

    if n <= DIRECT_SOLVE_MAX:
        if np.linalg.matrix_rank(balance_op) != n - 1:
            raise NonErgodicError("stationary law is not unique")
        a = np.vstack([balance_op, np.ones((1, n))])
        b = np.zeros(n + 1)
        b[-1] = 1.0
        pi, *_ = np.linalg.lstsq(a, b, rcond=None)
    else:
        t = _transition_like(chain)
        pi = np.full(n, 1.0 / n)
        for _ in range(POWER_ITERATION_CAP):
            nxt = pi @ t
            nxt /= nxt.sum()
            if np.abs(nxt - pi).sum() < tol:
                pi = nxt
                break
            pi = nxt
        else:
            raise NonErgodicError(
                f"power iteration did not converge within {POWER_ITERATION_CAP} sweeps"
            )

    if np.any(pi <= 0.0):
        raise NonErgodicError("stationary law is not strictly positive")
    pi = pi / pi.sum()
    residual = float(np.abs(balance_op @ pi).max())
    if residual > max(tol, 1e-10):
        raise NonErgodicError(f"stationary residual {residual:.3e} exceeds tolerance")
    return Distribution(pi)


def _check_discrete(chain: Chain) -> StochasticMatrix:
    if not isinstance(chain, StochasticMatrix):
        raise BadParamsError("operation requires a discrete-time chain")
    return chain


def evolve_distribution(chain: StochasticMatrix, init: Distribution, steps: int) -> list[Distribution]:
    """Forward trajectory [p_0, p_1, ..., p_steps] with p_{t+1} = p_t T."""
    chain = _check_discrete(chain)
    if init.n != chain.n:
        raise DimensionMismatchError(f"init has {init.n} states, chain has {chain.n}")
    if steps < 0:
        raise BadParamsError("steps must be nonnegative")
    out = [init]
    p = init.probs
    for _ in range(int(steps)):
        p = p @ chain.matrix
        out.append(Distribution(p))
    return out


def evolve_measures(chain: StochasticMatrix, family: MeasureFamily, steps: int) -> list[MeasureFamily]:
    """Push a whole measure family through the chain, one entry per step.

    Every row obeys mu_{t+1}(x) = sum_x' mu_t(x') P(x | x'); total mass of
    each row is conserved because the kernel rows sum to one.
    """
    chain = _check_discrete(chain)
    if family.n != chain.n:
        raise DimensionMismatchError(f"family has {family.n} states, chain has {chain.n}")
    if steps < 0:
        raise BadParamsError("steps must be nonnegative")
    out = [family]
    m = family.measures
    for _ in range(int(steps)):
        m = m @ chain.matrix
        out.append(MeasureFamily(m, require_positive=family.require_positive))
    return out


def integrate_master_equation(
    rates: RateMatrix, init: Distribution, dt: float, horizon: float
) -> list[tuple[float, Distribution]]:
    """Fixed-step RK4 trajectory of the master equation.

    Returns (time, law) pairs at t = 0, dt, 2 dt, ... up to the horizon.
    The step must satisfy max_x(total exit rate of x) * dt < 1, otherwise
    UnstableStepError is raised.
    """
    if not isinstance(rates, RateMatrix):
        raise BadParamsError("operation requires a continuous-time chain")
    if init.n != rates.n:
        raise DimensionMismatchError(f"init has {init.n} states, chain has {rates.n}")
    if dt <= 0.0 or horizon < dt:
        raise BadParamsError("need dt > 0 and horizon >= dt")
    exit_rate = float(rates.matrix.sum(axis=1).max())
    if exit_rate * dt >= 1.0:
        raise UnstableStepError(
            f"dt={dt} too large for max exit rate {exit_rate} (need product < 1)"
        )

    gen = rates.generator()
    steps = int(np.floor(horizon / dt + 1e-9))
    p = init.probs
    out = [(0.0, init)]
    for k in range(1, steps + 1):
        k1 = p @ gen
        k2 = (p + 0.5 * dt * k1) @ gen
        k3 = (p + 0.5 * dt * k2) @ gen
        k4 = (p + dt * k3) @ gen
        p = p + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        out.append((k * dt, Distribution(p)))
    return out


def check_balance(chain: Chain, pi: Distribution, tol: float = 1e-9) -> BalanceReport:
    """Diagnose global balance, detailed balance, and double stochasticity.

    The doubly-stochastic flag is a property of discrete kernels (column
    sums equal one) and is reported as False for rate matrices.
    """
    if pi.n != chain.n:
        raise DimensionMismatchError(f"law has {pi.n} states, chain has {chain.n}")
    p = pi.probs
    if isinstance(chain, StochasticMatrix):
        flow = p[:, None] * chain.matrix
        global_residual = float(np.abs(flow.sum(axis=0) - p).max())
        doubly = bool(np.abs(chain.matrix.sum(axis=0) - 1.0).max() <= tol)
    else:
        flow = p[:, None] * chain.matrix
        global_residual = float(np.abs(flow.sum(axis=0) - flow.sum(axis=1)).max())
        doubly = False
    detailed_residual = float(np.abs(flow - flow.T).max())

    global_ok = global_residual <= tol
    detailed_ok = detailed_residual <= tol and global_ok
    return BalanceReport(
        is_doubly_stochastic=doubly,
        satisfies_global_balance=global_ok,
        satisfies_detailed_balance=detailed_ok,
        max_residual=max(global_residual, detailed_residual),
    )


def backward_matrix(chain: StochasticMatrix, pi: Distribution) -> StochasticMatrix:
    """Time-reversed kernel B[x', x] = pi(x) P(x' | x) / pi(x').

    `pi` must be strictly positive and stationary for the chain; the rows of
    B then sum to one, and reversing twice restores the original kernel.
    """
    chain = _check_discrete(chain)
    if pi.n != chain.n:
        raise DimensionMismatchError(f"law has {pi.n} states, chain has {chain.n}")
    p = pi.probs
    if np.any(p <= 0.0):
        raise ZeroProbabilityError("reversal needs a strictly positive stationary law")
    residual = float(np.abs(p @ chain.matrix - p).max())
    if residual > 1e-9:
        raise NotStationaryError(f"law is not stationary (residual {residual:.3e})")
    b = (p[:, None] * chain.matrix).T / p[:, None]
    return StochasticMatrix(b)


def build_example_chain(kind: str, **params) -> Chain:
    """Construct one of the stock chains.

    kind selects the family:
      * ``mod_k_walk``: discrete walk x -> (x +/- 1) mod K, each with prob 1/2.
      * ``cyclic``: deterministic rotation x -> (x + 1) mod K.
      * ``mm1_truncated``: birth-death rates of a single-server queue with
        arrival rate ``lam`` and service rate ``mu``, cut at ``n_states``.
      * ``custom``: explicit ``matrix``, discrete unless ``continuous=True``.
    """
    if kind == "mod_k_walk":
        k = _int_param(params, "K")
        if k < 2:
            raise BadParamsError("mod_k_walk needs K >= 2")
        t = np.zeros((k, k))
        for i in range(k):
            t[i, (i + 1) % k] += 0.5
            t[i, (i - 1) % k] += 0.5
        return StochasticMatrix(t)
    if kind == "cyclic":
        k = _int_param(params, "K")
        if k < 2:
            raise BadParamsError("cyclic needs K >= 2")
        t = np.zeros((k, k))
        for i in range(k):
            t[i, (i + 1) % k] = 1.0
        return StochasticMatrix(t)
    if kind == "mm1_truncated":
        lam = float(params.get("lam", float("nan")))
        mu = float(params.get("mu", float("nan")))
        n = _int_param(params, "n_states")
        if not (lam > 0.0 and mu > 0.0 and lam < mu):
            raise BadParamsError("mm1_truncated needs 0 < lam < mu")
        if n < 2:
            raise BadParamsError("mm1_truncated needs n_states >= 2")
        w = np.zeros((n, n))
        for x in range(n - 1):
            w[x, x + 1] = lam
            w[x + 1, x] = mu
        return RateMatrix(w)
    if kind == "custom":
        if "matrix" not in params:
            raise BadParamsError("custom chain needs a matrix")
        if params.get("continuous", False):
            return RateMatrix(np.asarray(params["matrix"], dtype=float))
        return StochasticMatrix(np.asarray(params["matrix"], dtype=float))
    raise BadParamsError(f"unknown chain kind {kind!r}")


def _int_param(params: dict, name: str) -> int:
    if name not in params:
        raise BadParamsError(f"missing parameter {name!r}")
    value = params[name]
    if int(value) != value:
        raise BadParamsError(f"parameter {name!r} must be an integer")
    return int(value)
