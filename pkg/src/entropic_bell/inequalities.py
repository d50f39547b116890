"""Evaluation of the entropic inequalities on classical and three-qubit inputs.

Every check is phrased as ``lhs <= bound`` and returns an
:class:`InequalityReport` whose ``margin`` is ``bound - lhs``.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import UsageError
from .kernels import joint3_entropies
from .prob_core import JointDist3, clip_information
from .quantum_core import (
    DensityOperator,
    partial_trace,
    quantum_mutual_entropy,
    von_neumann_entropy,
)

SATISFY_TOL = 1e-9
#: How close every marginal entropy must be to 1 bit for the unit bound.
UNIFORM_TOL = 1e-6
AGREEMENT_TOL = 1e-9
CLASSICAL_BOUND = 1.0
QUANTUM_BOUND = 2.0
#: Max-norm gap below which a three-qubit state counts as (qubit) x (pair).
PRODUCT_TOL = 1e-9

REPORT_FIELDS = ("name", "lhs", "bound", "satisfied", "margin", "input_descriptor")


@dataclass(frozen=True)
class InequalityReport:
    name: str
    lhs: float
    bound: float
    satisfied: bool
    margin: float
    input_descriptor: str = ""
    notes: tuple = ()
    context: Mapping[str, float] = field(default_factory=dict)
    #: False for reports that are evaluated for information only.
    must_hold: bool = True

    @classmethod
    def evaluate(
        cls,
        name: str,
        lhs: float,
        bound: float,
        input_descriptor: str = "",
        tol: float = SATISFY_TOL,
        **extra,
    ) -> InequalityReport:
        margin = float(bound) - float(lhs)
        return cls(
            name=name,
            lhs=float(lhs),
            bound=float(bound),
            satisfied=bool(margin >= -tol),
            margin=margin,
            input_descriptor=input_descriptor,
            **extra,
        )

    @property
    def failed(self) -> bool:
        """A must-hold inequality that was violated."""
        return self.must_hold and not self.satisfied

    def to_dict(self, extras: bool = False) -> dict:
        out = {k: getattr(self, k) for k in REPORT_FIELDS}
        if extras:
            out["must_hold"] = self.must_hold
            out["notes"] = list(self.notes)
            out["context"] = dict(self.context)
        return out

    @classmethod
    def from_dict(cls, doc: dict) -> InequalityReport:
        return cls(
            name=doc["name"],
            lhs=float(doc["lhs"]),
            bound=float(doc["bound"]),
            satisfied=bool(doc["satisfied"]),
            margin=float(doc["margin"]),
            input_descriptor=doc.get("input_descriptor", ""),
            notes=tuple(doc.get("notes", ())),
            context=dict(doc.get("context", {})),
            must_hold=bool(doc.get("must_hold", True)),
        )


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REPORT_FIELDS)
    for r in reports:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in
                         (getattr(r, k) for k in REPORT_FIELDS)])
    return buf.getvalue()


def _describe(j: JointDist3) -> str:
    return "JointDist3 shape=" + "x".join(str(s) for s in j.shape)


@dataclass(frozen=True)
class _Info:
    hx: float
    hy: float
    hz: float
    hxy: float
    hxz: float
    hyz: float
    ixy: float
    ixz: float
    iyz: float


def _info(j: JointDist3) -> _Info:
    if not isinstance(j, JointDist3):
        raise TypeError(f"expected JointDist3, got {type(j).__name__}")
    hx, hy, hz, hxy, hxz, hyz, _ = joint3_entropies(j.probs)
    return _Info(
        hx=hx, hy=hy, hz=hz, hxy=hxy, hxz=hxz, hyz=hyz,
        ixy=clip_information(hx + hy - hxy),
        ixz=clip_information(hx + hz - hxz),
        iyz=clip_information(hy + hz - hyz),
    )


def _pipelining(i: _Info, desc: str, tol: float):
    return (
        InequalityReport.evaluate("pipelining_zy_ge_zx", i.ixz, i.iyz, desc, tol),
        InequalityReport.evaluate("pipelining_xy_ge_xz", i.ixz, i.ixy, desc, tol),
    )


def _triangle(i: _Info, desc: str, tol: float):
    return InequalityReport.evaluate("triangle", i.ixz, i.ixy + i.iyz, desc, tol)


def _bounded_differences(i: _Info, desc: str, tol: float):
    return (
        InequalityReport.evaluate("bounded_difference_y", i.ixy + i.iyz - i.ixz, i.hy, desc, tol),
        InequalityReport.evaluate("bounded_difference_x", i.ixy + i.ixz - i.iyz, i.hx, desc, tol),
        InequalityReport.evaluate("bounded_difference_z", -i.ixy + i.ixz + i.iyz, i.hz, desc, tol),
    )


def _cerf_adami_routes(i: _Info) -> tuple[float, float]:
    via_mutual = abs(i.ixy - i.ixz) + i.iyz
    via_joint = abs(i.hy - i.hz + i.hxz - i.hxy) + i.hy + i.hz - i.hyz
    return via_mutual, via_joint


def _cerf_adami(i: _Info, desc: str, tol: float):
    via_mutual, via_joint = _cerf_adami_routes(i)
    gap = abs(via_mutual - via_joint)
    if gap > AGREEMENT_TOL:
        raise ArithmeticError(f"Cerf-Adami evaluations disagree by {gap:.3g}")
    uniform = all(abs(h - 1.0) <= UNIFORM_TOL for h in (i.hx, i.hy, i.hz))
    if uniform:
        bound, notes = CLASSICAL_BOUND, ()
    else:
        bound = max(i.hy, i.hz)
        notes = ("marginals are not uniform bits; bound is max(H(Y), H(Z))",)
    return InequalityReport.evaluate(
        "cerf_adami_classical",
        via_mutual,
        bound,
        desc,
        tol,
        notes=notes,
        context={"lhs_joint_form": via_joint, "uniform_marginals": float(uniform)},
    )


def pipelining_check(j: JointDist3, descriptor: str | None = None, tol: float = SATISFY_TOL):
    """``H(Z:X) <= H(Z:Y)`` and ``H(X:Z) <= H(X:Y)``.

    Guaranteed only when ``j`` is the law of a chain ``X -> Y -> Z``.
    """
    return _pipelining(_info(j), descriptor or _describe(j), tol)


def triangle_check(j: JointDist3, descriptor: str | None = None, tol: float = SATISFY_TOL):
    """``H(X:Z) <= H(X:Y) + H(Y:Z)``."""
    return _triangle(_info(j), descriptor or _describe(j), tol)


def bounded_difference_checks(j: JointDist3, descriptor: str | None = None, tol: float = SATISFY_TOL):
    """The three single-entropy bounds on signed sums of pairwise mutual
    entropies, with right-hand sides ``H(Y)``, ``H(X)``, ``H(Z)``."""
    return _bounded_differences(_info(j), descriptor or _describe(j), tol)


def cerf_adami_lhs(j: JointDist3) -> tuple[float, float]:
    """Both evaluations of ``|H(X:Y) - H(X:Z)| + H(Y:Z)``.

    Returns ``(from_mutual_entropies, from_joint_entropies)``; the second route
    expands the mutual entropies into single and pairwise joint entropies.
    """
    return _cerf_adami_routes(_info(j))


def cerf_adami_classical(j: JointDist3, descriptor: str | None = None, tol: float = SATISFY_TOL):
    """``|H(X:Y) - H(X:Z)| + H(Y:Z) <= 1`` for uniform-bit marginals.

    When some marginal entropy is not 1 bit the unit bound is not derivable;
    the report then uses ``max(H(Y), H(Z))``, which follows from the
    Y- and Z-bounded difference inequalities, and says so in its notes.
    Raises ``ArithmeticError`` if the mutual-entropy and joint-entropy
    evaluations of the left side disagree.
    """
    return _cerf_adami(_info(j), descriptor or _describe(j), tol)


def classical_battery(j: JointDist3, descriptor: str | None = None, tol: float = SATISFY_TOL):
    """Every classical report for one three-way joint."""
    i = _info(j)
    desc = descriptor or _describe(j)
    return [
        *_pipelining(i, desc, tol),
        _triangle(i, desc, tol),
        *_bounded_differences(i, desc, tol),
        _cerf_adami(i, desc, tol),
    ]


def _three_qubits(rho: DensityOperator):
    if tuple(rho.dims) != (2, 2, 2):
        raise UsageError(f"expected three qubits (dims (2, 2, 2)), got {rho.dims}")


def is_qubit_times_pair(rho: DensityOperator, tol: float = PRODUCT_TOL) -> bool:
    """True when ``rho`` factorizes as ``rho_A (x) rho_BC``."""
    _three_qubits(rho)
    rho_a = partial_trace(rho, 0).matrix
    rho_bc = partial_trace(rho, (1, 2)).matrix
    return float(np.max(np.abs(np.kron(rho_a, rho_bc) - rho.matrix))) <= tol


def _quantum_pairs(rho: DensityOperator) -> tuple[float, float, float]:
    return (
        quantum_mutual_entropy(rho, 0, 1),
        quantum_mutual_entropy(rho, 0, 2),
        quantum_mutual_entropy(rho, 1, 2),
    )


def cerf_adami_quantum(rho: DensityOperator, descriptor: str = "three-qubit state",
                       tol: float = SATISFY_TOL) -> InequalityReport:
    """``|S(A:B) - S(A:C)| + S(B:C)`` against the quantum bound 2.

    The classical bound 1 is carried in ``context`` (``classical_bound``,
    ``classical_margin``).  The bound 2 is only asserted (``must_hold``) for
    states of the form (qubit A) x (pair BC).
    """
    _three_qubits(rho)
    s_ab, s_ac, s_bc = _quantum_pairs(rho)
    lhs = abs(s_ab - s_ac) + s_bc
    product = is_qubit_times_pair(rho)
    notes = []
    classical_margin = CLASSICAL_BOUND - lhs
    if classical_margin < -tol:
        notes.append(f"exceeds the classical bound {CLASSICAL_BOUND:g} by {-classical_margin:.6g}")
    if not product:
        notes.append("state is not (qubit) x (pair); bound 2 evaluated but not asserted")
    return InequalityReport.evaluate(
        "cerf_adami_quantum",
        lhs,
        QUANTUM_BOUND,
        descriptor,
        tol,
        notes=tuple(notes),
        context={
            "S_AB": s_ab,
            "S_AC": s_ac,
            "S_BC": s_bc,
            "classical_bound": CLASSICAL_BOUND,
            "classical_margin": classical_margin,
            "qubit_times_pair": float(product),
        },
        must_hold=product,
    )


def subadditivity_check(rho: DensityOperator, descriptor: str = "three-qubit state",
                        tol: float = SATISFY_TOL):
    """``S(A:B) + S(A:C) - S(B:C) <= 2`` and, when ``S(A) = 1``,
    ``S(A:B) + S(A:C) <= 2 S(A)``.

    Returns ``(pairwise_report, strong_report)``; ``strong_report`` is None
    when ``S(A)`` is not 1 bit.
    """
    _three_qubits(rho)
    s_ab, s_ac, s_bc = _quantum_pairs(rho)
    s_a = von_neumann_entropy(partial_trace(rho, 0))
    notes = []
    if max(s_ab, s_ac, s_bc) > 1.0 + tol:
        notes.append("a pairwise mutual entropy exceeds 1 bit")
    strong = None
    if abs(s_a - 1.0) <= UNIFORM_TOL:
        strong = InequalityReport.evaluate(
            "strong_subadditivity", s_ab + s_ac, 2.0 * s_a, descriptor, tol,
            notes=tuple(notes), context={"S_A": s_a},
        )
    else:
        notes.append(f"S(A) = {s_a:.6g} != 1; strong_subadditivity skipped")
    pairwise = InequalityReport.evaluate(
        "subadditivity_pairwise", s_ab + s_ac - s_bc, QUANTUM_BOUND, descriptor, tol,
        notes=tuple(notes), context={"S_A": s_a},
        must_hold=is_qubit_times_pair(rho),
    )
    return pairwise, strong
