"""Finite discrete distributions and Shannon-type entropies (base 2).

Cells with magnitude below :data:`ZERO_CELL` are treated as exactly zero, so
``0 log 0`` contributes nothing.  Distributions are validated on construction
and are immutable afterwards.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import UsageError, ValidationError
from .kernels import ZERO_CELL, entropy_bits

NORM_TOL = 1e-9
#: Mutual entropies in ``(-CLIP_TOL, 0)`` are rounding noise and clip to 0.
CLIP_TOL = 1e-9

#: Returned by :func:`relative_entropy` for a divergence that is infinite.
INFINITE_DIVERGENCE = math.inf


def _checked_probs(probs, ndim: int, renormalize: bool, what: str) -> np.ndarray:
    arr = np.array(probs, dtype=np.float64)
    if arr.ndim != ndim:
        raise ValidationError(f"{what} needs a rank-{ndim} array, got shape {arr.shape}")
    if arr.size == 0:
        raise ValidationError(f"{what} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{what} has non-finite entries")
    if np.any(arr < -ZERO_CELL):
        raise ValidationError(f"{what} has negative entries (min {arr.min():.3g})")
    arr[arr < 0] = 0.0
    total = arr.sum()
    if renormalize:
        if total <= 0:
            raise ValidationError(f"{what} has zero total mass")
        arr /= total
    elif abs(total - 1.0) > NORM_TOL:
        raise ValidationError(f"{what} sums to {total!r}, not 1")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ProbDist:
    """Probability vector over a finite alphabet, optionally labelled."""

    probs: np.ndarray
    labels: tuple | None = None
    renormalize: bool = field(default=False, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "probs", _checked_probs(self.probs, 1, self.renormalize, "ProbDist")
        )
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != self.probs.size:
                raise ValidationError(
                    f"{len(labels)} labels for {self.probs.size} outcomes"
                )
            object.__setattr__(self, "labels", labels)

    def __len__(self):
        return self.probs.size

    @classmethod
    def uniform(cls, n: int) -> ProbDist:
        return cls(np.full(n, 1.0 / n))

    def to_dict(self) -> dict:
        out = {"probs": self.probs.tolist()}
        if self.labels is not None:
            out["labels"] = list(self.labels)
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> ProbDist:
        return cls(doc["probs"], labels=doc.get("labels"))


class _Joint:
    rank = 0

    def __init__(self, probs, renormalize: bool = False):
        self.probs = _checked_probs(probs, self.rank, renormalize, type(self).__name__)

    @property
    def shape(self) -> tuple:
        return self.probs.shape

    def to_dict(self) -> dict:
        return {"shape": list(self.probs.shape), "probs": self.probs.tolist()}

    @classmethod
    def from_dict(cls, doc: dict):
        probs = np.array(doc["probs"], dtype=np.float64)
        if "shape" in doc and tuple(doc["shape"]) != probs.shape:
            raise ValidationError(
                f"declared shape {doc['shape']} does not match data {probs.shape}"
            )
        return cls(probs)

    def __repr__(self):
        return f"{type(self).__name__}(shape={self.probs.shape})"


class JointDist2(_Joint):
    """Joint distribution ``p(x, y)``."""

    rank = 2

    def transpose(self) -> JointDist2:
        return JointDist2(self.probs.T)


class JointDist3(_Joint):
    """Joint distribution ``p(x, y, z)``."""

    rank = 3


class StochasticMatrix:
    """Row-stochastic transition matrix; row index is the source symbol."""

    def __init__(self, rows):
        arr = np.array(rows, dtype=np.float64)
        if arr.ndim != 2 or arr.size == 0:
            raise ValidationError(f"StochasticMatrix needs a non-empty matrix, got {arr.shape}")
        if not np.all(np.isfinite(arr)) or np.any(arr < -ZERO_CELL):
            raise ValidationError("StochasticMatrix has negative or non-finite entries")
        arr[arr < 0] = 0.0
        bad = np.abs(arr.sum(axis=1) - 1.0) > NORM_TOL
        if np.any(bad):
            raise ValidationError(f"rows {np.flatnonzero(bad).tolist()} do not sum to 1")
        arr.setflags(write=False)
        self.rows = arr

    @property
    def shape(self) -> tuple:
        return self.rows.shape

    @classmethod
    def identity(cls, n: int) -> StochasticMatrix:
        return cls(np.eye(n))

    @classmethod
    def binary_symmetric(cls, flip: float) -> StochasticMatrix:
        return cls([[1.0 - flip, flip], [flip, 1.0 - flip]])

    def __repr__(self):
        return f"StochasticMatrix(shape={self.rows.shape})"


def _as_probs(d) -> np.ndarray:
    if isinstance(d, ProbDist):
        return d.probs
    if isinstance(d, _Joint):
        return d.probs
    raise TypeError(f"expected a distribution, got {type(d).__name__}")


def shannon_entropy(d: ProbDist) -> float:
    """Shannon entropy of ``d`` in bits."""
    return entropy_bits(_as_probs(d))


def joint_entropy2(j: JointDist2) -> float:
    """Joint entropy ``H(X, Y)`` in bits."""
    if not isinstance(j, JointDist2):
        raise TypeError(f"expected JointDist2, got {type(j).__name__}")
    return entropy_bits(j.probs)


def joint_entropy(j) -> float:
    """Entropy of a joint distribution of any rank, in bits."""
    return entropy_bits(_as_probs(j))


def marginal(j: JointDist2 | JointDist3, keep: Sequence[int] | int):
    """Sum out every axis not listed in ``keep``.

    The kept axes appear in the order given, so ``marginal(j3, (2, 1))`` is the
    ``(z, y)`` joint.  One kept axis gives a :class:`ProbDist`, two give a
    :class:`JointDist2`.
    """
    if not isinstance(j, _Joint):
        raise TypeError(f"expected a joint distribution, got {type(j).__name__}")
    keep = (keep,) if isinstance(keep, (int, np.integer)) else tuple(keep)
    if not keep:
        raise UsageError("keep must name at least one axis")
    if len(set(keep)) != len(keep) or any(k < 0 or k >= j.rank for k in keep):
        raise UsageError(f"keep={keep} is not a set of axes of a rank-{j.rank} joint")
    drop = tuple(ax for ax in range(j.rank) if ax not in keep)
    summed = j.probs.sum(axis=drop) if drop else j.probs
    # axes left after summing are in ascending order; reorder to match keep
    order = [sorted(keep).index(k) for k in keep]
    summed = np.transpose(summed, order)
    if len(keep) == 1:
        return ProbDist(summed)
    if len(keep) == 2:
        return JointDist2(summed)
    return JointDist3(summed)


def _product_support_violation(p: np.ndarray, q: np.ndarray) -> bool:
    return bool(np.any((p > ZERO_CELL) & (q <= 0.0)))


def relative_entropy(j: JointDist2, reference: JointDist2 | None = None) -> float:
    """Divergence of ``p(x, y)`` from the product of its marginals, in bits.

    Evaluated as ``H(X) + H(Y) - H(X, Y)``.  With an explicit ``reference``
    joint ``q`` the direct sum ``sum p log(p / q)`` is used instead.  Either
    way, mass of ``p`` on a cell where the reference is zero yields
    :data:`INFINITE_DIVERGENCE`.
    """
    p = j.probs
    if reference is None:
        px = p.sum(axis=1)
        py = p.sum(axis=0)
        if _product_support_violation(p, np.outer(px, py)):
            return INFINITE_DIVERGENCE
        return entropy_bits(px) + entropy_bits(py) - entropy_bits(p)
    q = reference.probs
    if q.shape != p.shape:
        raise UsageError(f"reference shape {q.shape} != {p.shape}")
    if _product_support_violation(p, q):
        return INFINITE_DIVERGENCE
    mask = p > ZERO_CELL
    return float(np.sum(p[mask] * np.log2(p[mask] / q[mask])))


def clip_information(value: float, what: str = "mutual entropy") -> float:
    """Clip rounding-level negatives to zero; reject anything more negative."""
    if value < 0.0:
        if value > -CLIP_TOL:
            return 0.0
        raise ArithmeticError(f"{what} is {value!r} < 0 beyond rounding noise")
    return value


def mutual_entropy(j: JointDist2) -> float:
    """Mutual entropy ``H(X:Y) = H(X) + H(Y) - H(X,Y)`` in bits."""
    p = j.probs
    h = entropy_bits(p.sum(axis=1)) + entropy_bits(p.sum(axis=0)) - entropy_bits(p)
    return clip_information(h)


def pairwise_mutual(j: JointDist3, a: int, b: int) -> float:
    """Mutual entropy between axes ``a`` and ``b`` of a three-way joint."""
    return mutual_entropy(marginal(j, (a, b)))


def markov_chain(px: ProbDist, t1: StochasticMatrix, t2: StochasticMatrix) -> JointDist3:
    """Joint law of the chain ``X -> Y -> Z``: ``p(x) t1[x, y] t2[y, z]``."""
    if t1.shape[0] != len(px):
        raise UsageError(f"t1 has {t1.shape[0]} rows but X has {len(px)} symbols")
    if t2.shape[0] != t1.shape[1]:
        raise UsageError(f"t2 has {t2.shape[0]} rows but Y has {t1.shape[1]} symbols")
    probs = np.einsum("x,xy,yz->xyz", px.probs, t1.rows, t2.rows)
    return JointDist3(probs, renormalize=True)


def random_stochastic(rng: np.random.Generator, n_rows: int, n_cols: int) -> StochasticMatrix:
    rows = rng.uniform(0.0, 1.0, size=(n_rows, n_cols))
    return StochasticMatrix(rows / rows.sum(axis=1, keepdims=True))


def random_markov_chain(
    rng: np.random.Generator, sizes: Sequence[int] = (2, 3, 4)
) -> JointDist3:
    """Random chain with alphabet sizes drawn from ``sizes``.

    The source law and every transition row are normalized independent
    uniform(0, 1) draws.
    """
    nx, ny, nz = (int(rng.choice(sizes)) for _ in range(3))
    raw = rng.uniform(0.0, 1.0, size=nx)
    px = ProbDist(raw / raw.sum())
    return markov_chain(px, random_stochastic(rng, nx, ny), random_stochastic(rng, ny, nz))


def random_uniform_bit_chain(rng: np.random.Generator) -> JointDist3:
    """Random chain of uniform bits: two binary symmetric channels in series.

    Doubly stochastic 2x2 matrices are exactly the binary symmetric channels,
    so every marginal stays uniform.
    """
    f1, f2 = rng.uniform(0.0, 1.0, size=2)
    return markov_chain(
        ProbDist.uniform(2),
        StochasticMatrix.binary_symmetric(f1),
        StochasticMatrix.binary_symmetric(f2),
    )


def dist_from_dict(doc: dict):
    """Build a ProbDist / JointDist2 / JointDist3 from its JSON mapping."""
    probs = np.asarray(doc["probs"], dtype=np.float64)
    if probs.ndim == 1:
        return ProbDist.from_dict(doc)
    if probs.ndim == 2:
        return JointDist2.from_dict(doc)
    if probs.ndim == 3:
        return JointDist3.from_dict(doc)
    raise ValidationError(f"unsupported distribution rank {probs.ndim}")


def dumps(d) -> str:
    return json.dumps(d.to_dict())


def loads(text: str):
    return dist_from_dict(json.loads(text))
