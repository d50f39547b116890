"""Density operators, partial traces, von Neumann entropy and measurement channels.

Subsystems are indexed big-endian: in a state on ``dims = (2, 3)`` the basis
vector ``|i, j>`` sits at flat index ``3 * i + j``.  Entropies are in bits.
"""

from __future__ import annotations

import enum
import functools
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import UsageError, ValidationError
from .kernels import entropy_bits, jacobi_eigh
from .prob_core import ProbDist

HERMITIAN_TOL = 1e-10
TRACE_TOL = 1e-9
PSD_FLOOR = -1e-10
OPERATOR_TOL = 1e-9
MAX_DIM = 16


def _as_matrix(m, what: str = "matrix") -> np.ndarray:
    arr = np.array(m, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValidationError(f"{what} must be square and non-empty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{what} has non-finite entries")
    return arr


def _hermiticity_gap(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def hermitian_eigensystem(m) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (descending) and orthonormal eigenvector columns of ``m``."""
    m = _as_matrix(m)
    gap = _hermiticity_gap(m)
    if gap > HERMITIAN_TOL * max(1.0, float(np.max(np.abs(m)))):
        raise ValidationError(f"matrix is not Hermitian (max |M - M^H| = {gap:.3g})")
    return jacobi_eigh(0.5 * (m + m.conj().T))


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Descending probability vector of eigenvalues."""

    eigenvalues: np.ndarray

    def __post_init__(self):
        lam = np.array(self.eigenvalues, dtype=np.float64).ravel()
        if lam.size == 0:
            raise ValidationError("empty spectrum")
        if np.any(lam < PSD_FLOOR):
            raise ValidationError(f"spectrum has negative entry {lam.min():.3g}")
        lam = np.clip(lam, 0.0, None)
        if np.any(np.diff(lam) > 1e-12):
            raise ValidationError("spectrum is not sorted in descending order")
        if abs(lam.sum() - 1.0) > TRACE_TOL:
            raise ValidationError(f"spectrum sums to {lam.sum()!r}, not 1")
        lam.setflags(write=False)
        object.__setattr__(self, "eigenvalues", lam)

    @classmethod
    def from_values(cls, values: Iterable[float]) -> Spectrum:
        """Sort ``values`` descending and wrap them."""
        return cls(np.sort(np.asarray(list(values), dtype=np.float64))[::-1])

    def __len__(self):
        return self.eigenvalues.size

    def entropy(self) -> float:
        return entropy_bits(self.eigenvalues)


class DensityOperator:
    """Hermitian, unit-trace, positive semidefinite matrix with subsystem dims."""

    def __init__(self, matrix, dims: Sequence[int] | None = None):
        m = _as_matrix(matrix, "density matrix")
        n = m.shape[0]
        if n > MAX_DIM:
            raise ValidationError(f"dimension {n} exceeds the supported maximum {MAX_DIM}")
        dims = (n,) if dims is None else tuple(int(d) for d in dims)
        if any(d < 1 for d in dims) or int(np.prod(dims)) != n:
            raise ValidationError(f"subsystem dims {dims} do not multiply to {n}")
        gap = _hermiticity_gap(m)
        if gap > HERMITIAN_TOL:
            raise ValidationError(f"density matrix is not Hermitian (gap {gap:.3g})")
        m = 0.5 * (m + m.conj().T)
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"trace is {tr!r}, not 1")
        values, vectors = jacobi_eigh(m)
        if values[-1] < PSD_FLOOR:
            raise ValidationError(f"not positive semidefinite (min eigenvalue {values[-1]:.3g})")
        m.setflags(write=False)
        self.matrix = m
        self.dims = dims
        self._values = values
        self._vectors = vectors

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @functools.cached_property
    def spectrum(self) -> Spectrum:
        lam = np.clip(self._values, 0.0, None)
        return Spectrum(lam / lam.sum())

    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        return self._values.copy(), self._vectors.copy()

    def purity(self) -> float:
        return float(np.real(np.trace(self.matrix @ self.matrix)))

    @classmethod
    def pure(cls, ket, dims: Sequence[int] | None = None) -> DensityOperator:
        psi = np.asarray(ket, dtype=np.complex128).ravel()
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()), dims)

    @classmethod
    def maximally_mixed(cls, dim: int, dims: Sequence[int] | None = None) -> DensityOperator:
        return cls(np.eye(dim) / dim, dims)

    @classmethod
    def diagonal(cls, probs, dims: Sequence[int] | None = None) -> DensityOperator:
        return cls(np.diag(np.asarray(probs, dtype=np.float64)), dims)

    def to_dict(self) -> dict:
        return {
            "dims": list(self.dims),
            "re": self.matrix.real.tolist(),
            "im": self.matrix.imag.tolist(),
        }

    @classmethod
    def from_dict(cls, doc: dict) -> DensityOperator:
        m = np.asarray(doc["re"], dtype=np.float64) + 1j * np.asarray(doc.get("im", 0.0))
        return cls(m, doc.get("dims"))

    def __repr__(self):
        return f"DensityOperator(dims={self.dims})"


class MeasurementKind(enum.Enum):
    PROJECTIVE = "projective"
    POVM_EFFECTS = "povm"
    KRAUS = "kraus"


class MeasurementSet:
    """Measurement operators of one kind, checked against that kind's invariants.

    * projective: Hermitian idempotents, pairwise orthogonal, summing to I
    * povm: Hermitian PSD effects summing to I
    * kraus: ``sum M^H M = I``
    """

    def __init__(self, operators: Sequence, kind: MeasurementKind | str):
        kind = MeasurementKind(kind)
        ops = [_as_matrix(op, "measurement operator") for op in operators]
        if not ops:
            raise ValidationError("a measurement needs at least one operator")
        n = ops[0].shape[0]
        if any(op.shape != (n, n) for op in ops):
            raise ValidationError("measurement operators differ in dimension")
        eye = np.eye(n)
        if kind is MeasurementKind.KRAUS:
            total = sum(op.conj().T @ op for op in ops)
            _require_close(total, eye, "Kraus completeness sum M^H M = I")
        else:
            for i, op in enumerate(ops):
                if _hermiticity_gap(op) > OPERATOR_TOL:
                    raise ValidationError(f"operator {i} is not Hermitian")
            _require_close(sum(ops), eye, "completeness sum = I")
            if kind is MeasurementKind.PROJECTIVE:
                for i, p in enumerate(ops):
                    _require_close(p @ p, p, f"projector {i} idempotence")
                    for j in range(i + 1, len(ops)):
                        _require_close(p @ ops[j], 0.0 * eye, f"projectors {i},{j} orthogonality")
            else:
                for i, op in enumerate(ops):
                    lowest = jacobi_eigh(0.5 * (op + op.conj().T))[0][-1]
                    if lowest < -OPERATOR_TOL:
                        raise ValidationError(f"effect {i} is not PSD (min eigenvalue {lowest:.3g})")
        for op in ops:
            op.setflags(write=False)
        self.operators = tuple(ops)
        self.kind = kind

    @property
    def dim(self) -> int:
        return self.operators[0].shape[0]

    def __len__(self):
        return len(self.operators)

    @classmethod
    def computational_basis(cls, dim: int, kind="projective") -> MeasurementSet:
        return cls([np.diag(np.eye(dim)[i]) for i in range(dim)], kind)

    @classmethod
    def from_basis(cls, vectors: np.ndarray, kind="projective") -> MeasurementSet:
        """Rank-one projectors onto the columns of a unitary ``vectors``."""
        cols = np.asarray(vectors, dtype=np.complex128)
        return cls([np.outer(cols[:, i], cols[:, i].conj()) for i in range(cols.shape[1])], kind)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "operators": [{"re": op.real.tolist(), "im": op.imag.tolist()} for op in self.operators],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> MeasurementSet:
        ops = [
            np.asarray(o["re"], dtype=np.float64) + 1j * np.asarray(o.get("im", 0.0))
            for o in doc["operators"]
        ]
        return cls(ops, doc["kind"])

    def __repr__(self):
        return f"MeasurementSet(kind={self.kind.value}, n={len(self)}, dim={self.dim})"


def _require_close(a, b, what: str, tol: float = OPERATOR_TOL):
    gap = float(np.max(np.abs(np.asarray(a) - np.asarray(b))))
    if gap > tol:
        raise ValidationError(f"{what} violated (max deviation {gap:.3g})")


def tensor(a: DensityOperator, b: DensityOperator) -> DensityOperator:
    """Kronecker product; ``a`` becomes the more significant factor."""
    return DensityOperator(np.kron(a.matrix, b.matrix), a.dims + b.dims)


def tensor_all(*states: DensityOperator) -> DensityOperator:
    return functools.reduce(tensor, states)


def _reduce(matrix: np.ndarray, dims: tuple, keep: tuple) -> np.ndarray:
    n = len(dims)
    t = matrix.reshape(dims + dims)
    drop = [i for i in range(n) if i not in keep]
    # bring (keep..., drop...) to the front on both ket and bra sides
    perm = list(keep) + drop + [n + i for i in keep] + [n + i for i in drop]
    t = t.transpose(perm)
    dk = int(np.prod([dims[i] for i in keep]))
    dd = int(np.prod([dims[i] for i in drop])) if drop else 1
    t = t.reshape(dk, dd, dk, dd)
    return np.einsum("ajbj->ab", t)


def _check_parts(rho: DensityOperator, part) -> tuple:
    part = (part,) if isinstance(part, (int, np.integer)) else tuple(part)
    if not part:
        raise UsageError("subsystem set must be non-empty")
    if len(set(part)) != len(part) or any(i < 0 or i >= len(rho.dims) for i in part):
        raise UsageError(f"{part} is not a set of subsystems of {rho.dims}")
    return part


def partial_trace(rho: DensityOperator, keep) -> DensityOperator:
    """Reduced operator on the subsystems in ``keep`` (in the order given)."""
    keep = _check_parts(rho, keep)
    reduced = _reduce(rho.matrix, rho.dims, keep)
    return DensityOperator(reduced, tuple(rho.dims[i] for i in keep))


def von_neumann_entropy(rho: DensityOperator) -> float:
    """``-tr(rho log2 rho)`` from the clamped spectrum."""
    return rho.spectrum.entropy()


def povm_distribution(rho: DensityOperator, m: MeasurementSet) -> ProbDist:
    """Outcome law ``p_i = tr(rho A_i)``."""
    if m.kind is not MeasurementKind.POVM_EFFECTS and m.kind is not MeasurementKind.PROJECTIVE:
        raise UsageError(f"povm_distribution needs effects, got a {m.kind.value} set")
    if m.dim != rho.dim:
        raise UsageError(f"effects act on dim {m.dim}, state has dim {rho.dim}")
    vals = np.array([np.trace(rho.matrix @ a) for a in m.operators])
    if np.max(np.abs(vals.imag)) > OPERATOR_TOL:
        raise ValidationError("tr(rho A) has a non-negligible imaginary part")
    return ProbDist(vals.real)


def _apply(rho: DensityOperator, ops: Iterable[np.ndarray]) -> DensityOperator:
    out = sum(k @ rho.matrix @ k.conj().T for k in ops)
    return DensityOperator(out, rho.dims)


def projective_measure_channel(rho: DensityOperator, m: MeasurementSet) -> DensityOperator:
    """Non-selective projective measurement ``sum P rho P``."""
    if m.kind is not MeasurementKind.PROJECTIVE:
        raise UsageError(f"expected a projective measurement, got {m.kind.value}")
    if m.dim != rho.dim:
        raise UsageError(f"projectors act on dim {m.dim}, state has dim {rho.dim}")
    return _apply(rho, m.operators)


def kraus_channel(rho: DensityOperator, m: MeasurementSet) -> DensityOperator:
    """Generalized measurement ``sum M rho M^H``.  Entropy may go down."""
    if m.dim != rho.dim:
        raise UsageError(f"Kraus operators act on dim {m.dim}, state has dim {rho.dim}")
    if m.kind is not MeasurementKind.KRAUS:
        # projectors and povm square roots are not interchangeable in general;
        # re-validate as Kraus so completeness is checked in that sense
        m = MeasurementSet(m.operators, MeasurementKind.KRAUS)
    return _apply(rho, m.operators)


def bell_pair() -> DensityOperator:
    """``(|00> + |11>)/sqrt(2)`` on dims ``(2, 2)``."""
    return DensityOperator.pure([1.0, 0.0, 0.0, 1.0], (2, 2))


def quantum_mutual_entropy(rho: DensityOperator, part_a, part_b) -> float:
    """``S(A) + S(B) - S(A, B)`` in bits; other subsystems are traced out first."""
    part_a = _check_parts(rho, part_a)
    part_b = _check_parts(rho, part_b)
    if set(part_a) & set(part_b):
        raise UsageError(f"parts {part_a} and {part_b} overlap")
    joint = partial_trace(rho, part_a + part_b)
    na = len(part_a)
    s_a = von_neumann_entropy(partial_trace(joint, range(na)))
    s_b = von_neumann_entropy(partial_trace(joint, range(na, na + len(part_b))))
    value = s_a + s_b - von_neumann_entropy(joint)
    if value < 0.0 and value > -1e-9:
        return 0.0
    return value


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_density(dim: int, seed, dims: Sequence[int] | None = None) -> DensityOperator:
    """Reduced state of a random pure state on ``dim x dim`` (full rank a.s.)."""
    if dim < 1:
        raise UsageError("dim must be positive")
    rng = _rng(seed)
    psi = rng.standard_normal(dim * dim) + 1j * rng.standard_normal(dim * dim)
    psi /= np.linalg.norm(psi)
    # row index = kept half, column index = traced half
    amp = psi.reshape(dim, dim)
    return DensityOperator(amp @ amp.conj().T, dims)


def random_hermitian(dim: int, seed) -> np.ndarray:
    rng = _rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return 0.5 * (g + g.conj().T)


def random_projective(dim: int, seed) -> MeasurementSet:
    """Rank-one projectors onto the eigenbasis of a random Hermitian matrix."""
    _, vectors = jacobi_eigh(random_hermitian(dim, seed))
    return MeasurementSet.from_basis(vectors, MeasurementKind.PROJECTIVE)


def random_povm(dim: int, n_outcomes: int, seed) -> MeasurementSet:
    """Effects ``S^{-1/2} G_i S^{-1/2}`` with ``G_i`` random PSD and ``S = sum G_i``."""
    rng = _rng(seed)
    if n_outcomes < 1:
        raise UsageError("a POVM needs at least one outcome")
    grams = []
    total_rank = 0
    for i in range(n_outcomes):
        rank = int(rng.integers(1, dim + 1))
        if i == n_outcomes - 1:
            # keep sum G_i full rank so S^{-1/2} exists
            rank = max(rank, min(dim, dim - total_rank))
        total_rank += rank
        b = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
        grams.append(b @ b.conj().T)
    values, vectors = jacobi_eigh(sum(grams))
    inv_sqrt = (vectors / np.sqrt(values)) @ vectors.conj().T
    effects = [inv_sqrt @ g @ inv_sqrt for g in grams]
    effects = [0.5 * (e + e.conj().T) for e in effects]
    return MeasurementSet(effects, MeasurementKind.POVM_EFFECTS)


def dumps(obj) -> str:
    return json.dumps(obj.to_dict())


def loads(text: str):
    doc = json.loads(text)
    if "kind" in doc:
        return MeasurementSet.from_dict(doc)
    return DensityOperator.from_dict(doc)
