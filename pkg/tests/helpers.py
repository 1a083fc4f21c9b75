"""Seeded random generators shared across the test modules."""

import numpy as np

from infodyn import (
    ConvexFunction,
    Distribution,
    JointDistribution,
    MeasureFamily,
    StochasticMatrix,
    builtin,
)


def random_chain(rng, n):
    """Dense strictly positive kernel; ergodic by construction."""
    m = rng.random((n, n)) + 0.05
    m /= m.sum(axis=1, keepdims=True)
    return StochasticMatrix(m)


def random_distribution(rng, n):
    p = rng.random(n) + 0.05
    return Distribution(p / p.sum())


def random_joint(rng, nx, ny):
    t = rng.random((nx, ny)) + 0.05
    return JointDistribution(t / t.sum())


def random_family(rng, n, k):
    m = rng.random((k + 1, n)) + 0.05
    return MeasureFamily(m)


def doubly_stochastic_chain(rng, n):
    """Convex mix of permutation matrices, one of them the full cycle.

    Keeping the cycle in the mix with positive weight makes the result
    irreducible; the mix of permutations is exactly doubly stochastic.
    """
    perms = [np.eye(n), np.roll(np.eye(n), 1, axis=1)]
    for _ in range(3):
        perms.append(np.eye(n)[rng.permutation(n)])
    weights = rng.random(len(perms)) + 0.1
    weights /= weights.sum()
    m = sum(w * p for w, p in zip(weights, perms))
    return StochasticMatrix(m)


def _pair_relative_entropy(vec):
    u1, u2 = vec
    return u1 * np.log(u1 / u2)


def _triple_separable(vec):
    return vec[0] ** 2 - np.log(vec[1]) + vec[2] * np.log(vec[2])


def multi_convex(k):
    """A jointly convex function of arity k for family and grid functionals.

    k=2 is the perspective of -log written out; k=3 is a separable sum of
    builtins; higher arities use the max of the coordinates.
    """
    if k == 1:
        return builtin("u_log_u")
    if k == 2:
        return ConvexFunction("pair_relative_entropy", 2, _pair_relative_entropy)
    if k == 3:
        return ConvexFunction("triple_separable", 3, _triple_separable)
    return ConvexFunction(f"max_{k}", k, lambda vec: float(np.max(vec)))


def all_builtins():
    """One instance of every builtin family member used in sweeps."""
    return [
        builtin("u_log_u"),
        builtin("neg_log"),
        builtin("neg_pow", s=0.3),
        builtin("neg_sqrt"),
        builtin("square"),
        builtin("half_square"),
        builtin("piecewise_linear", breakpoints=[(0.1, 1.0), (1.0, 0.0), (4.0, 3.0)]),
    ]
