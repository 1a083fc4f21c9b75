"""Entropies, f-divergences, and generalized information functionals.

The common shape is a ratio functional: a reference measure weights a
convex function of ratios of companion measures to that reference,

    sum_cell  ref(cell) * Q(m_1(cell)/ref(cell), ..., m_k(cell)/ref(cell)).

Cells where the reference vanishes contribute zero when every companion
vanishes there too.  For arity-1 functionals, a companion that keeps mass
on such a cell contributes its mass times lim_{u->inf} Q(u)/u when that
limit is finite (the continuity value of the term); if the limit diverges
the operation raises SupportMismatchError.  Multi-measure functionals are
strict: positive companion mass on a null reference cell is always an
error.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Sequence

import numpy as np

from .convexity import ConvexFunction
from .errors import (
    ArityMismatchError,
    BadCoefficientsError,
    BadParamsError,
    DimensionMismatchError,
    NotMarkovError,
    SupportMismatchError,
    TooManyLettersError,
)
from .markov import Distribution, MeasureFamily, StochasticMatrix

__all__ = [
    "JointDistribution",
    "PairMeasure",
    "shannon_entropy",
    "kl_divergence",
    "f_divergence",
    "generalized_mutual_information",
    "generalized_lautum_information",
    "zakai_ziv_functional",
    "measure_family_functional",
    "mixed_measure_information",
    "expected_mixed_measure_information",
    "simple_extension_coefficients",
    "embed_markov_triple",
]

NORMALIZATION_ATOL = 1e-12
MARKOV_FACTORIZATION_ATOL = 1e-9
MAX_ENUMERATED_LETTERS = 3


def _frozen_table(a, ndim: int) -> np.ndarray:
    t = np.array(a, dtype=float, copy=True)
    if t.ndim != ndim or t.size == 0:
        raise BadParamsError(f"need a nonempty {ndim}-d table")
    if np.any(t < 0.0):
        raise BadParamsError("table entries must be nonnegative")
    t.setflags(write=False)
    return t


@dataclass(frozen=True)
class JointDistribution:
    """Joint law of a pair (X, Y) on finite alphabets."""

    table: np.ndarray

    def __post_init__(self) -> None:
        t = _frozen_table(self.table, 2)
        if abs(t.sum() - 1.0) > NORMALIZATION_ATOL:
            raise BadParamsError(f"joint sums to {t.sum()!r}, expected 1")
        object.__setattr__(self, "table", t)

    @property
    def nx(self) -> int:
        return self.table.shape[0]

    @property
    def ny(self) -> int:
        return self.table.shape[1]

    def marginal_x(self) -> np.ndarray:
        return self.table.sum(axis=1)

    def marginal_y(self) -> np.ndarray:
        return self.table.sum(axis=0)


@dataclass(frozen=True)
class PairMeasure:
    """Nonnegative measure on the same grid as a joint law; no normalization."""

    table: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "table", _frozen_table(self.table, 2))

    @property
    def shape(self) -> tuple[int, int]:
        return self.table.shape


def shannon_entropy(p: Distribution) -> float:
    """Entropy in nats, with the 0 log 0 = 0 convention."""
    probs = p.probs
    pos = probs > 0.0
    return float(-np.sum(probs[pos] * np.log(probs[pos])))


def kl_divergence(p, base) -> float:
    """Classical divergence sum p log(p / base) in nats.

    Accepts Distributions or raw vectors.  Infinite when p keeps mass
    where the base vanishes; that case raises rather than returning inf.
    """
    a = p.probs if isinstance(p, Distribution) else np.asarray(p, dtype=float)
    b = base.probs if isinstance(base, Distribution) else np.asarray(base, dtype=float)
    if a.shape != b.shape:
        raise DimensionMismatchError(f"laws have shapes {a.shape} and {b.shape}")
    pos = a > 0.0
    if np.any(b[pos] == 0.0):
        raise SupportMismatchError("divergence is infinite: mass where the base law is zero")
    return float(np.sum(a[pos] * np.log(a[pos] / b[pos])))


def _require_arity(q: ConvexFunction, arity: int) -> None:
    if q.arity != arity:
        raise ArityMismatchError(f"{q.name} has arity {q.arity}, expected {arity}")


def _ratio_functional(q: ConvexFunction, reference: np.ndarray, companion: np.ndarray) -> float:
    """sum ref * Q(companion / ref) with the null-cell conventions above."""
    pos = reference > 0.0
    tail = 0.0
    extinct = companion[~pos]
    if extinct.size and np.any(extinct > 0.0):
        if q.recession_slope is None:
            raise SupportMismatchError(
                f"companion mass on a null reference cell and {q.name} grows superlinearly"
            )
        tail = q.recession_slope * float(extinct.sum())
    values = q.batch(companion[pos] / reference[pos])
    return float(np.sum(reference[pos] * values)) + tail


def f_divergence(q: ConvexFunction, p1: Distribution, p2: Distribution) -> float:
    """D_Q(p1 || p2) = sum_x p1(x) Q(p2(x) / p1(x)).

    Note the direction: the first argument weights, the second sits in the
    numerator of the ratio.  Q(u) = -log u therefore yields the classical
    divergence of p1 from p2, while Q(u) = u log u yields the reverse one.
    """
    _require_arity(q, 1)
    if p1.n != p2.n:
        raise DimensionMismatchError(f"laws have {p1.n} and {p2.n} states")
    return _ratio_functional(q, p1.probs, p2.probs)


def generalized_mutual_information(q: ConvexFunction, joint: JointDistribution) -> float:
    """Joint-weighted convex functional of the independence ratio.

    I_Q(X; Y) = sum_{x,y} P(x,y) Q(P(x)P(y) / P(x,y)).  Jensen's inequality
    floors the value at Q(1), with equality when X and Y are independent.
    """
    _require_arity(q, 1)
    prod = np.outer(joint.marginal_x(), joint.marginal_y())
    return _ratio_functional(q, joint.table, prod)


def generalized_lautum_information(q: ConvexFunction, joint: JointDistribution) -> float:
    """Product-weighted twin of the mutual information functional.

    Swaps the roles of the joint law and the product of marginals:
    sum_{x,y} P(x)P(y) Q(P(x,y) / (P(x)P(y))).  With Q(u) = u log u this is
    the classical mutual information; with Q(u) = -log u, the lautum value.
    """
    _require_arity(q, 1)
    prod = np.outer(joint.marginal_x(), joint.marginal_y())
    return _ratio_functional(q, prod, joint.table)


def zakai_ziv_functional(
    q: ConvexFunction, joint: JointDistribution, measures: Sequence[PairMeasure]
) -> float:
    """Multi-measure information functional weighted by the joint law.

    sum_{x,y} P(x,y) Q(m_1(x,y)/P(x,y), ..., m_k(x,y)/P(x,y)) for a jointly
    convex Q of k arguments.  Strict on support: every measure must vanish
    wherever the joint does.
    """
    if len(measures) != q.arity:
        raise ArityMismatchError(f"{len(measures)} measures for arity-{q.arity} function")
    for m in measures:
        if m.shape != joint.table.shape:
            raise DimensionMismatchError("measure grid does not match the joint law")
    stack = np.stack([m.table for m in measures])
    return _cellwise_functional(q, joint.table, stack)


def measure_family_functional(q: ConvexFunction, family: MeasureFamily) -> float:
    """Reference-weighted convex functional of a measure family.

    sum_x mu0(x) Q(mu1(x)/mu0(x), ..., muk(x)/mu0(x)).  Evolving the family
    by one Markov step can only decrease this value.
    """
    if family.k != q.arity:
        raise ArityMismatchError(f"family has k={family.k}, function arity {q.arity}")
    return _cellwise_functional(q, family.reference, family.measures[1:])


def _cellwise_functional(q: ConvexFunction, reference: np.ndarray, stack: np.ndarray) -> float:
    ref = reference.ravel()
    rows = stack.reshape(stack.shape[0], -1)
    null = ref == 0.0
    if np.any(rows[:, null] > 0.0):
        raise SupportMismatchError("measure mass on a cell where the reference vanishes")
    total = 0.0
    for idx in np.flatnonzero(~null):
        ratios = rows[:, idx] / ref[idx]
        total += ref[idx] * (q(float(ratios[0])) if q.arity == 1 else q(ratios))
    return float(total)


def _coeff_vector(coeffs, expected: int, label: str) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (expected,):
        raise BadCoefficientsError(f"{label} coefficients must have length {expected}")
    if not np.all(np.isfinite(c)):
        raise BadCoefficientsError(f"{label} coefficients must be finite")
    return c


def _conditional_rows(joint: JointDistribution) -> tuple[np.ndarray, np.ndarray]:
    px = joint.marginal_x()
    cond = np.zeros_like(joint.table)
    pos = px > 0.0
    cond[pos] = joint.table[pos] / px[pos, None]
    return px, cond


def _mixture(table, px, cond, coeffs) -> np.ndarray:
    """coeffs[0] * P(x,y) + P(x) * sum_i coeffs[i] P(y | x_{i-1})."""
    blend = coeffs[1:] @ cond
    return coeffs[0] * table + px[:, None] * blend[None, :]


def mixed_measure_information(
    q: ConvexFunction, joint: JointDistribution, s_coeffs, t_coeffs
) -> float:
    """Information value for a linearly combined pair of measures.

    The reference is s0 P(x,y) + P(x) sum_i s_i P(y|x_i) and the companion
    is the same blend with t coefficients, the letters x_i running over the
    whole X alphabet.  Requires s_i >= 0 with at least one strictly
    positive; the t side is unconstrained.
    """
    _require_arity(q, 1)
    s = _coeff_vector(s_coeffs, joint.nx + 1, "s")
    t = _coeff_vector(t_coeffs, joint.nx + 1, "t")
    if np.any(s < 0.0) or not np.any(s > 0.0):
        raise BadCoefficientsError("s coefficients must be nonnegative with one positive")
    px, cond = _conditional_rows(joint)
    needed = (s[1:] != 0.0) | (t[1:] != 0.0)
    if np.any(needed & (px == 0.0)):
        raise SupportMismatchError("a weighted letter has zero marginal probability")
    reference = _mixture(joint.table, px, cond, s)
    companion = _mixture(joint.table, px, cond, t)
    if np.any(companion < 0.0):
        raise SupportMismatchError("t blend goes negative, outside the function domain")
    return _ratio_functional(q, reference.ravel(), companion.ravel())


def simple_extension_coefficients(joint: JointDistribution, s: float) -> tuple[np.ndarray, np.ndarray]:
    """Coefficients that blend the joint with s times the marginal product.

    Plugging these into `mixed_measure_information` gives the reference
    P(x,y) + s P(x)P(y) against the companion P(x)P(y); at s = 0 the value
    coincides with `generalized_mutual_information`.
    """
    if s < 0.0:
        raise BadCoefficientsError("extension weight s must be nonnegative")
    px = joint.marginal_x()
    s_coeffs = np.concatenate(([1.0], s * px))
    t_coeffs = np.concatenate(([0.0], px))
    return s_coeffs, t_coeffs


def expected_mixed_measure_information(
    q: ConvexFunction, joint: JointDistribution, s_coeffs, t_coeffs, num_letters: int
) -> float:
    """Exact expectation of the mixed-measure value over random letters.

    The letters X_1 ... X_m are drawn independently from the X marginal;
    the expectation enumerates all |X|^m tuples, so m is capped at
    MAX_ENUMERATED_LETTERS.
    """
    _require_arity(q, 1)
    if num_letters < 1:
        raise BadParamsError("need at least one letter")
    if num_letters > MAX_ENUMERATED_LETTERS:
        raise TooManyLettersError(
            f"{num_letters} letters would enumerate {joint.nx}^{num_letters} tuples"
        )
    s = _coeff_vector(s_coeffs, num_letters + 1, "s")
    t = _coeff_vector(t_coeffs, num_letters + 1, "t")
    if np.any(s < 0.0) or not np.any(s > 0.0):
        raise BadCoefficientsError("s coefficients must be nonnegative with one positive")
    px, cond = _conditional_rows(joint)

    total = 0.0
    for letters in product(range(joint.nx), repeat=num_letters):
        weight = float(np.prod(px[list(letters)]))
        if weight == 0.0:
            continue
        rows = cond[list(letters)]
        reference = s[0] * joint.table + px[:, None] * (s[1:] @ rows)[None, :]
        companion = t[0] * joint.table + px[:, None] * (t[1:] @ rows)[None, :]
        if np.any(companion < 0.0):
            raise SupportMismatchError("t blend goes negative, outside the function domain")
        total += weight * _ratio_functional(q, reference.ravel(), companion.ravel())
    return float(total)


def embed_markov_triple(
    p_uvw: np.ndarray,
) -> tuple[StochasticMatrix, MeasureFamily, MeasureFamily]:
    """Recast a Markov triple U -> V -> W as one step of a pair chain.

    States are pairs (u, c) with c in a common alphabet of size
    max(|V|, |W|).  The kernel moves (u, v) to (u, w) with probability
    P(w | v), so pushing the pair of measures (P(u, v), P(u)P(v)) through
    one step lands exactly on (P(u, w), P(u)P(w)).  Rows for letters
    outside the V support get a filler transition that carries no mass.

    Raises NotMarkovError when the triple does not factor as
    P(u, v) P(w | v) within 1e-9.
    """
    p3 = np.asarray(p_uvw, dtype=float)
    if p3.ndim != 3 or p3.size == 0:
        raise BadParamsError("need a 3-d joint table")
    if np.any(p3 < 0.0):
        raise BadParamsError("joint entries must be nonnegative")
    if abs(p3.sum() - 1.0) > NORMALIZATION_ATOL:
        raise BadParamsError(f"joint sums to {p3.sum()!r}, expected 1")
    nu, nv, nw = p3.shape

    p_uv = p3.sum(axis=2)
    p_vw = p3.sum(axis=0)
    p_v = p_uv.sum(axis=0)
    p_u = p_uv.sum(axis=1)
    p_uw = p3.sum(axis=1)
    p_w = p_vw.sum(axis=0)

    cond_wv = np.zeros((nv, nw))
    vpos = p_v > 0.0
    cond_wv[vpos] = p_vw[vpos] / p_v[vpos, None]
    gap = np.abs(p3 - p_uv[:, :, None] * cond_wv[None, :, :]).max()
    if gap > MARKOV_FACTORIZATION_ATOL:
        raise NotMarkovError(f"triple is not Markov (factorization gap {gap:.3e})")

    r = max(nv, nw)
    kernel = np.zeros((nu * r, nu * r))
    for u in range(nu):
        for c in range(r):
            row = u * r + c
            if c < nv and vpos[c]:
                kernel[row, u * r : u * r + nw] = cond_wv[c]
            else:
                kernel[row, u * r] = 1.0

    mu = np.zeros((2, nu * r))
    mu_next = np.zeros((2, nu * r))
    for u in range(nu):
        mu[0, u * r : u * r + nv] = p_uv[u]
        mu[1, u * r : u * r + nv] = p_u[u] * p_v
        mu_next[0, u * r : u * r + nw] = p_uw[u]
        mu_next[1, u * r : u * r + nw] = p_u[u] * p_w

    return (
        StochasticMatrix(kernel),
        MeasureFamily(mu, require_positive=False),
        MeasureFamily(mu_next, require_positive=False),
    )
