"""Seeded property campaigns over random inputs.

Trial ``i`` of a campaign with seed ``s`` draws from its own generator
``default_rng([s, i])``, so results do not depend on trial order or on how
trials are split across worker processes.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import inequalities as ineq
from . import mixing_order, prob_core, quantum_core, thermo
from .errors import EntropicBellError, UsageError
from .inequalities import InequalityReport

KINDS = (
    "classical-bell",
    "quantum-bell",
    "projective-second-law",
    "povm-positivity",
    "mixing-order",
    "thermo-mixing",
)
MAX_LISTED_FAILURES = 50


@dataclass
class CampaignSpec:
    kind: str
    trials: int
    seed: int
    params: dict = field(default_factory=dict)
    tolerance: float = ineq.SATISFY_TOL

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError(f"unknown campaign kind {self.kind!r}; choose from {', '.join(KINDS)}")
        if int(self.trials) < 1:
            raise UsageError("trials must be >= 1")
        if int(self.seed) < 0:
            raise UsageError("seed must be a nonnegative integer")
        if not self.tolerance >= 0:
            raise UsageError("tolerance must be nonnegative")
        self.trials = int(self.trials)
        self.seed = int(self.seed)
        _validate_params(self.kind, self.params)

    def to_dict(self) -> dict:
        return asdict(self)


_DIM_LIMITS = {
    "classical-bell": ("sizes", (2, 3, 4), 2, 8),
    "projective-second-law": ("dims", (2, 3, 4), 1, quantum_core.MAX_DIM),
    "povm-positivity": ("dims", (2, 3, 4), 1, quantum_core.MAX_DIM),
    "mixing-order": ("dims", (2, 3, 4, 5, 6), 2, 64),
    "thermo-mixing": ("max_sites", 8, 1, 64),
}


def _validate_params(kind: str, params: dict):
    if kind == "quantum-bell":
        config = params.setdefault("config", "product")
        if config not in ("product", "bell", "general"):
            raise UsageError("quantum-bell config must be product, bell or general")
        return
    if kind == "povm-positivity":
        outcomes = params.setdefault("max_outcomes", 6)
        if not 1 <= int(outcomes) <= 32:
            raise UsageError("max_outcomes must lie in 1..32")
    key, default, lo, hi = _DIM_LIMITS[kind]
    value = params.setdefault(key, default)
    values = value if isinstance(value, (list, tuple)) else [value]
    if not values or any(not lo <= int(v) <= hi for v in values):
        raise UsageError(f"{kind}: {key} must lie in {lo}..{hi}, got {value!r}")
    params[key] = [int(v) for v in values] if isinstance(value, (list, tuple)) else int(value)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng([seed, trial])


def _classical_bell(rng, params, tol):
    chain = prob_core.random_markov_chain(rng, params["sizes"])
    bits = prob_core.random_uniform_bit_chain(rng)
    reports = ineq.classical_battery(chain, "random Markov chain", tol)
    reports += ineq.classical_battery(bits, "uniform-bit Markov chain", tol)
    for j, desc in ((chain, "random Markov chain"), (bits, "uniform-bit Markov chain")):
        via_mutual, via_joint = ineq.cerf_adami_lhs(j)
        reports.append(
            InequalityReport.evaluate(
                "cerf_adami_route_agreement", abs(via_mutual - via_joint),
                ineq.AGREEMENT_TOL, desc, 0.0,
            )
        )
    return reports


def _quantum_bell(rng, params, tol):
    config = params["config"]
    if config == "general":
        rho = quantum_core.random_density(8, rng, (2, 2, 2))
        desc = "random three-qubit state"
    elif config == "bell":
        ket = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        a = quantum_core.DensityOperator.pure(ket)
        rho = quantum_core.tensor(a, quantum_core.bell_pair())
        desc = "pure qubit (x) Bell pair"
    else:
        a = quantum_core.random_density(2, rng)
        bc = quantum_core.random_density(4, rng, (2, 2))
        rho = quantum_core.tensor(a, bc)
        desc = "qubit (x) two-qubit state"
    pairwise, strong = ineq.subadditivity_check(rho, desc, tol)
    out = [ineq.cerf_adami_quantum(rho, desc, tol), pairwise]
    if strong is not None:
        out.append(strong)
    return out


def _pick(rng, values):
    return int(rng.choice(values)) if isinstance(values, list) else int(values)


def _projective(rng, params, tol):
    dim = _pick(rng, params["dims"])
    rho = quantum_core.random_density(dim, rng)
    meas = quantum_core.random_projective(dim, rng)
    after = quantum_core.projective_measure_channel(rho, meas)
    return [
        InequalityReport.evaluate(
            "projective_entropy_nondecrease",
            quantum_core.von_neumann_entropy(rho),
            quantum_core.von_neumann_entropy(after),
            f"dim={dim}",
            tol,
        )
    ]


def _povm(rng, params, tol):
    dim = _pick(rng, params["dims"])
    n_out = int(rng.integers(1, params["max_outcomes"] + 1))
    rho = quantum_core.random_density(dim, rng)
    effects = quantum_core.random_povm(dim, n_out, rng)
    dist = quantum_core.povm_distribution(rho, effects)
    return [
        InequalityReport.evaluate(
            "povm_entropy_nonnegative",
            -prob_core.shannon_entropy(dist),
            0.0,
            f"dim={dim} outcomes={n_out}",
            tol,
        )
    ]


def _mixing(rng, params, tol):
    while True:
        dim = _pick(rng, params["dims"])
        a = mixing_order.random_spectrum(rng, dim)
        b = mixing_order.random_spectrum(rng, dim)
        verdict = mixing_order.compare_mixing(a, b)
        if verdict is not mixing_order.MixingComparison.INCOMPARABLE:
            break
    if verdict is mixing_order.MixingComparison.RIGHT_LESS_MIXED:
        a, b = b, a
    return [
        InequalityReport.evaluate(
            "entropy_mixing_homomorphism", a.entropy(), b.entropy(),
            f"dim={dim} verdict={verdict.value}", tol,
        )
    ]


def _thermo_mixing(rng, params, tol):
    max_sites = params["max_sites"]
    sa, sb = (int(v) for v in rng.integers(1, max_sites + 1, size=2))
    na, nb = int(rng.integers(0, sa + 1)), int(rng.integers(0, sb + 1))
    distinct = thermo.LatticeScenario(sa, sb, na, nb, same_species=False)
    same = thermo.LatticeScenario(sa, sb, na, nb, same_species=True)
    s_distinct = thermo.entropy_of_mixing(distinct)
    s_same = thermo.entropy_of_mixing(same)
    desc = f"sites={sa}+{sb} particles={na}+{nb}"
    return [
        InequalityReport.evaluate("mixing_entropy_nonnegative", -s_distinct, 0.0, desc + " distinct", tol),
        InequalityReport.evaluate("mixing_entropy_nonnegative", -s_same, 0.0, desc + " same", tol),
        InequalityReport.evaluate("same_species_le_distinct", s_same, s_distinct, desc, tol),
    ]


_TRIALS = {
    "classical-bell": _classical_bell,
    "quantum-bell": _quantum_bell,
    "projective-second-law": _projective,
    "povm-positivity": _povm,
    "mixing-order": _mixing,
    "thermo-mixing": _thermo_mixing,
}


def run_trial(spec: CampaignSpec, trial: int):
    """Reports for one trial, or the error it raised as ``(None, message)``."""
    rng = trial_rng(spec.seed, trial)
    try:
        return _TRIALS[spec.kind](rng, spec.params, spec.tolerance), None
    except (EntropicBellError, ArithmeticError) as exc:
        return None, f"{type(exc).__name__}: {exc}"


def _run_chunk(spec: CampaignSpec, trials: range):
    return [(t, *run_trial(spec, t)) for t in trials]


@dataclass
class CampaignResult:
    spec: CampaignSpec
    summary: dict
    #: Worst-margin report per inequality name, in first-seen order.
    worst: list
    failures: list
    all_reports: list | None = None

    @property
    def ok(self) -> bool:
        return self.summary["failure_count"] == 0


def run_campaign(spec: CampaignSpec, workers: int = 1, keep_all: bool = False) -> CampaignResult:
    """Run every trial of ``spec`` and aggregate per-inequality statistics.

    A trial fails when a must-hold report is violated or a module raises; the
    error message is kept with its trial index.
    """
    if workers > 1 and spec.trials > 1:
        bounds = np.linspace(0, spec.trials, min(workers * 4, spec.trials) + 1).astype(int)
        chunks = [range(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = [row for part in pool.map(_run_chunk, [spec] * len(chunks), chunks) for row in part]
    else:
        outcomes = _run_chunk(spec, range(spec.trials))
    outcomes.sort(key=lambda row: row[0])

    stats: dict[str, dict] = {}
    worst: dict[str, InequalityReport] = {}
    failures = []
    failure_count = 0
    kept = [] if keep_all else None
    for trial, reports, error in outcomes:
        if error is not None:
            failure_count += 1
            if len(failures) < MAX_LISTED_FAILURES:
                failures.append({"trial": trial, "error": error})
            continue
        for r in reports:
            if kept is not None:
                kept.append(r)
            s = stats.setdefault(
                r.name,
                {"evaluated": 0, "satisfied": 0, "asserted": 0, "min_margin": math.inf,
                 "max_lhs": -math.inf},
            )
            s["evaluated"] += 1
            s["satisfied"] += int(r.satisfied)
            s["asserted"] += int(r.must_hold)
            s["max_lhs"] = max(s["max_lhs"], r.lhs)
            if r.must_hold:
                s["min_margin"] = min(s["min_margin"], r.margin)
                if r.name not in worst or r.margin < worst[r.name].margin:
                    worst[r.name] = r
            if r.failed:
                failure_count += 1
                if len(failures) < MAX_LISTED_FAILURES:
                    failures.append({"trial": trial, "name": r.name, "margin": r.margin,
                                     "input_descriptor": r.input_descriptor})
    for s in stats.values():
        if s["min_margin"] == math.inf:
            s["min_margin"] = None
    margins = [s["min_margin"] for s in stats.values() if s["min_margin"] is not None]
    summary = {
        "trials": spec.trials,
        "failure_count": failure_count,
        "min_margin": min(margins) if margins else None,
        "by_name": stats,
    }
    return CampaignResult(spec, summary, list(worst.values()), failures, kept)
