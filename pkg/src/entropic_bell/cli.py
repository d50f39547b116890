"""Command-line front end: ``entropic-bell {check,campaign,scenario,report}``."""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from . import inequalities as ineq
from . import mixing_order, prob_core, quantum_core, thermo
from .campaigns import KINDS, CampaignSpec, run_campaign
from .errors import EntropicBellError, UsageError
from .inequalities import InequalityReport

SCENARIOS = ("bell-violation", "noiseless-chain", "mixing-lattice", "sackur-tetrode-sweep", "phase-space")
EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


# -- output ------------------------------------------------------------------

def _document(seed, spec: dict, results, summary: dict) -> dict:
    return {
        "tool_version": __version__,
        "seed": seed,
        "spec": spec,
        "results": [r.to_dict(extras=True) for r in results],
        "summary": summary,
    }


def _fmt(x) -> str:
    if isinstance(x, bool) or x is None:
        return str(x)
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _render_text(doc: dict) -> str:
    lines = [f"entropic-bell {doc['tool_version']}  spec={json.dumps(doc['spec'], sort_keys=True)}"]
    for r in doc["results"]:
        status = "ok" if r["satisfied"] else ("VIOLATED" if r.get("must_hold", True) else "exceeded")
        lines.append(
            f"  {r['name']:<32} lhs={_fmt(r['lhs']):>12} bound={_fmt(r['bound']):>12} "
            f"margin={_fmt(r['margin']):>12}  {status}  [{r['input_descriptor']}]"
        )
        for note in r.get("notes", ()):
            lines.append(f"      note: {note}")
    lines.append("summary:")
    lines.extend(_summary_lines(doc["summary"], "  "))
    return "\n".join(lines) + "\n"


def _summary_lines(obj, indent: str):
    for key, value in obj.items():
        if isinstance(value, dict):
            yield f"{indent}{key}:"
            yield from _summary_lines(value, indent + "  ")
        elif isinstance(value, list) and value and isinstance(value[0], (list, tuple)):
            yield f"{indent}{key}: {len(value)} rows"
        else:
            yield f"{indent}{key}: {_fmt(value)}"


def _render_csv(doc: dict) -> str:
    rows = doc["summary"].get("rows")
    if rows is not None and not doc["results"]:
        header = doc["summary"].get("columns", ["x", "y"])
        return ",".join(header) + "\n" + "".join(",".join(repr(float(v)) for v in row) + "\n" for row in rows)
    return ineq.reports_to_csv(InequalityReport.from_dict(r) for r in doc["results"])


def render(doc: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, allow_nan=False, default=_json_default) + "\n"
    if fmt == "csv":
        return _render_csv(doc)
    return _render_text(doc)


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _emit(doc: dict, args) -> None:
    text = render(doc, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _rescale(report: InequalityReport, factor: float) -> InequalityReport:
    if factor == 1.0:
        return report
    return InequalityReport(
        name=report.name,
        lhs=report.lhs * factor,
        bound=report.bound * factor,
        satisfied=report.satisfied,
        margin=report.margin * factor,
        input_descriptor=report.input_descriptor,
        notes=report.notes + ("values converted from bits to nats",),
        context={k: (v * factor if k.startswith(("S_", "lhs", "classical_")) else v)
                 for k, v in report.context.items()},
        must_hold=report.must_hold,
    )


def _bits_factor(args) -> float:
    return math.log(2.0) if args.log_base == "e" else 1.0


def _thermo_cfg(args) -> thermo.ThermoConfig:
    if args.log_base == "2":
        print("warning: thermo quantities are natural-log based; --log-base 2 ignored", file=sys.stderr)
    if args.thermo_config:
        cfg = thermo.ThermoConfig.load(args.thermo_config)
    else:
        cfg = thermo.ThermoConfig()
    return thermo.ThermoConfig(
        k=args.k if args.k is not None else cfg.k,
        h=args.h if args.h is not None else cfg.h,
    )


def _exit_code(results) -> int:
    return EXIT_FAILED if any(r.failed for r in results) else EXIT_OK


# -- scenarios ---------------------------------------------------------------

def run_scenario(name: str, args) -> tuple[list, dict, dict]:
    """Return ``(reports, summary_values, spec)`` for a named scenario."""
    tol = args.tolerance
    if name == "bell-violation":
        theta = args.theta
        a = quantum_core.DensityOperator.pure([math.cos(theta / 2), math.sin(theta / 2)])
        rho = quantum_core.tensor(a, quantum_core.bell_pair())
        desc = f"pure qubit(theta={theta:g}) (x) Bell pair on B,C"
        quantum = ineq.cerf_adami_quantum(rho, desc, tol)
        pairwise, strong = ineq.subadditivity_check(rho, desc, tol)
        reports = [quantum, pairwise] + ([strong] if strong else [])
        bc = quantum_core.partial_trace(rho, (1, 2))
        values = {
            "S_B": quantum_core.von_neumann_entropy(quantum_core.partial_trace(rho, 1)),
            "S_C": quantum_core.von_neumann_entropy(quantum_core.partial_trace(rho, 2)),
            "S_BC": quantum_core.von_neumann_entropy(bc),
            "classical_bound": ineq.CLASSICAL_BOUND,
            "classical_bound_violated": quantum.lhs > ineq.CLASSICAL_BOUND + tol,
        }
        factor = _bits_factor(args)
        values = {k: (v * factor if k.startswith("S_") else v) for k, v in values.items()}
        return [_rescale(r, factor) for r in reports], values, {"scenario": name, "theta": theta}
    if name == "noiseless-chain":
        n = args.alphabet
        j = prob_core.markov_chain(
            prob_core.ProbDist.uniform(n),
            prob_core.StochasticMatrix.identity(n),
            prob_core.StochasticMatrix.identity(n),
        )
        reports = ineq.classical_battery(j, f"noiseless chain, uniform {n}-ary source", tol)
        factor = _bits_factor(args)
        return [_rescale(r, factor) for r in reports], {}, {"scenario": name, "alphabet": n}
    if name == "mixing-lattice":
        if not args.sites or not args.particles:
            raise UsageError("mixing-lattice needs --sites A B and --particles A B")
        cfg = _thermo_cfg(args)
        s = thermo.LatticeScenario(*args.sites, *args.particles, same_species=not args.distinct)
        s_mix = thermo.entropy_of_mixing(s, cfg)
        before, after = thermo.mixing_multiplicities(s)
        report = InequalityReport.evaluate(
            "mixing_entropy_nonnegative", -s_mix, 0.0,
            f"sites={s.sites_a}+{s.sites_b} particles={s.particles_a}+{s.particles_b} "
            f"{'same species' if s.same_species else 'distinct species'}", tol,
        )
        values = {"entropy_of_mixing": s_mix, "omega_before": before, "omega_after": after, "k": cfg.k}
        spec = {"scenario": name, "sites": list(args.sites), "particles": list(args.particles),
                "distinct": bool(args.distinct)}
        return [report], values, spec
    if name == "sackur-tetrode-sweep":
        cfg = _thermo_cfg(args)
        if args.k is None and not args.thermo_config:
            cfg = thermo.ThermoConfig(k=thermo.BOLTZMANN, h=cfg.h)
        temps = np.logspace(math.log10(args.tmin), math.log10(args.tmax), args.points)
        rows = thermo.sackur_tetrode_sweep(temps, args.density, args.mass, args.moles, cfg)
        crossover = thermo.sackur_tetrode_crossover(args.density, args.mass, cfg.h)
        values = {
            "crossover_temperature": crossover,
            "number_density": args.density,
            "mass": args.mass,
            "columns": ["temperature_K", "entropy"],
            "rows": [list(r) for r in rows],
        }
        spec = {"scenario": name, "tmin": args.tmin, "tmax": args.tmax, "points": args.points}
        return [], values, spec
    if name == "phase-space":
        cfg = _thermo_cfg(args)
        if args.dp is None or args.dq is None:
            raise UsageError("phase-space needs --dp and --dq")
        entropy, below = thermo.phase_space_entropy(args.dp, args.dq, args.dof, cfg)
        values = {"entropy": entropy, "below_uncertainty_floor": below,
                  "ratio": args.dp * args.dq / cfg.h}
        spec = {"scenario": name, "dp": args.dp, "dq": args.dq, "d": args.dof}
        return [], values, spec
    raise UsageError(f"unknown scenario {name!r}; available: {', '.join(SCENARIOS)}")


# -- check -------------------------------------------------------------------

def check_document(doc: dict, tol: float, descriptor: str):
    """Evaluate every applicable inequality for a JSON input object."""
    if "spectra" in doc:
        a, b = (quantum_core.Spectrum.from_values(s) for s in doc["spectra"])
        verdict = mixing_order.compare_mixing(a, b)
        reports = []
        if verdict is not mixing_order.MixingComparison.INCOMPARABLE:
            lo, hi = (b, a) if verdict is mixing_order.MixingComparison.RIGHT_LESS_MIXED else (a, b)
            reports.append(InequalityReport.evaluate(
                "entropy_mixing_homomorphism", lo.entropy(), hi.entropy(), descriptor, tol))
        return reports, {"verdict": verdict.value}
    if "re" in doc:
        rho = quantum_core.DensityOperator.from_dict(doc)
        if tuple(rho.dims) != (2, 2, 2):
            return [], {"von_neumann_entropy": quantum_core.von_neumann_entropy(rho)}
        pairwise, strong = ineq.subadditivity_check(rho, descriptor, tol)
        reports = [ineq.cerf_adami_quantum(rho, descriptor, tol), pairwise]
        return reports + ([strong] if strong else []), {}
    dist = prob_core.dist_from_dict(doc)
    if isinstance(dist, prob_core.JointDist3):
        return ineq.classical_battery(dist, descriptor, tol), {}
    if isinstance(dist, prob_core.JointDist2):
        mi = prob_core.mutual_entropy(dist)
        report = InequalityReport.evaluate("mutual_entropy_nonnegative", -mi, 0.0, descriptor, tol)
        return [report], {"mutual_entropy": mi, "relative_entropy": prob_core.relative_entropy(dist),
                          "joint_entropy": prob_core.joint_entropy2(dist)}
    return [], {"shannon_entropy": prob_core.shannon_entropy(dist)}


# -- commands ----------------------------------------------------------------

def cmd_check(args) -> int:
    with open(args.input) as fh:
        doc = json.load(fh)
    reports, values = check_document(doc, args.tolerance, args.input)
    reports = [_rescale(r, _bits_factor(args)) for r in reports]
    summary = dict(values, failure_count=sum(r.failed for r in reports))
    _emit(_document(None, {"check": args.input}, reports, summary), args)
    return _exit_code(reports)


def _parse_params(pairs) -> dict:
    params = {}
    for item in pairs or ():
        key, sep, raw = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects KEY=VALUE, got {item!r}")
        try:
            value = json.loads(raw)
        except json.JSONDecodeError:
            value = raw
        params[key.replace("-", "_")] = value
    return params


def cmd_campaign(args) -> int:
    spec = CampaignSpec(args.kind, args.trials, args.seed, _parse_params(args.param), args.tolerance)
    result = run_campaign(spec, workers=args.workers, keep_all=args.results == "all")
    factor = _bits_factor(args) if spec.kind != "thermo-mixing" else 1.0
    reports = result.all_reports if args.results == "all" else result.worst
    reports = [_rescale(r, factor) for r in reports]
    summary = dict(result.summary, failures=result.failures)
    _emit(_document(spec.seed, spec.to_dict(), reports, summary), args)
    return EXIT_OK if result.ok else EXIT_FAILED


def cmd_scenario(args) -> int:
    reports, values, spec = run_scenario(args.name, args)
    summary = dict(values, failure_count=sum(r.failed for r in reports))
    _emit(_document(None, spec, reports, summary), args)
    return _exit_code(reports)


def cmd_report(args) -> int:
    with open(args.input) as fh:
        doc = json.load(fh)
    for key in ("tool_version", "spec", "results", "summary"):
        if key not in doc:
            raise UsageError(f"{args.input} is not an entropic-bell output document (missing {key!r})")
    _emit(doc, args)
    failed = any(r.get("must_hold", True) and not r["satisfied"] for r in doc["results"])
    return EXIT_FAILED if failed or doc["summary"].get("failure_count") else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json", "csv"), default="text")
    common.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
    common.add_argument("--tolerance", type=float, default=ineq.SATISFY_TOL,
                        help="slack allowed before an inequality counts as violated")
    common.add_argument("--log-base", choices=("2", "e"), default=None,
                        help="report information quantities in bits (2) or nats (e)")
    common.add_argument("--seed", type=int, default=0)

    thermo_opts = argparse.ArgumentParser(add_help=False)
    thermo_opts.add_argument("--k", type=float, default=None, help="entropy unit per nat")
    thermo_opts.add_argument("--h", type=float, default=None, help="Planck constant")
    thermo_opts.add_argument("--thermo-config", metavar="FILE", help='JSON {"k": ..., "h": ...}')

    parser = argparse.ArgumentParser(prog="entropic-bell", description=__doc__)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="evaluate inequalities for a JSON input")
    p.add_argument("input", help="ProbDist / JointDist / DensityOperator / spectra JSON file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("campaign", parents=[common], help="run a seeded property campaign")
    p.add_argument("kind", choices=KINDS)
    p.add_argument("--trials", type=int, default=10_000)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--param", action="append", metavar="KEY=VALUE",
                   help="kind-specific parameter, e.g. dims=[2,3] or config=bell")
    p.add_argument("--results", choices=("worst", "all"), default="worst",
                   help="emit the worst report per inequality, or every report")
    p.set_defaults(func=cmd_campaign)

    p = sub.add_parser("scenario", parents=[common, thermo_opts], help="run a named scenario")
    p.add_argument("name", help=f"one of: {', '.join(SCENARIOS)}")
    p.add_argument("--theta", type=float, default=0.0, help="Bloch angle of qubit A")
    p.add_argument("--alphabet", type=int, default=2)
    p.add_argument("--sites", type=int, nargs=2, metavar=("A", "B"))
    p.add_argument("--particles", type=int, nargs=2, metavar=("A", "B"))
    p.add_argument("--distinct", action="store_true", help="the two compartments hold different species")
    p.add_argument("--tmin", type=float, default=1e-4)
    p.add_argument("--tmax", type=float, default=10.0)
    p.add_argument("--points", type=int, default=41)
    p.add_argument("--density", type=float, default=thermo.LOSCHMIDT, help="number density, 1/m^3")
    p.add_argument("--mass", type=float, default=thermo.HELIUM4_MASS, help="particle mass, kg")
    p.add_argument("--moles", type=float, default=1.0)
    p.add_argument("--dp", type=float)
    p.add_argument("--dq", type=float)
    p.add_argument("--dof", type=int, default=1, help="degrees of freedom d")
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("report", parents=[common], help="re-render a saved JSON output")
    p.add_argument("input")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (EntropicBellError, OSError, json.JSONDecodeError, KeyError) as exc:
        print(f"entropic-bell: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
