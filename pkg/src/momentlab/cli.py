"""Command-line front end.

    momentlab <analyze|variety|consistency|measure|classify> [options] INPUT

INPUT is a moment-sequence JSON file, or a directory of them (processed in
filename order, optionally in parallel with ``--jobs``).  Exit codes follow
the verdict: 0 measure exists, 1 no measure, 2 out of scope, 3 indeterminate,
4 input error.  For a directory the largest per-file code is returned.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .moments import DEFAULT_PRECISION_CAP, MomentError, MomentSequence, build_moment_matrix, check_recursive, riesz
from .poly import MultiPoly, PolynomialParseError
from .solver import SolverConfig, Verdict, classify, decide_extremal
from .variety import DEFAULT_TOL, NoRelations, PositiveDimensional, compute_variety, vanishes_on

EXIT_INPUT_ERROR = 4
COMMANDS = ("analyze", "variety", "consistency", "measure", "classify")
PRECISION_ENV = "MOMENTLAB_PRECISION_CAP"


class InputError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    input_path: str | None
    tol: Fraction = DEFAULT_TOL
    precision_cap: int = DEFAULT_PRECISION_CAP
    output_format: str = "json"
    order: str = "grlex"
    jobs: int = 1
    polys: tuple[str, ...] = ()
    r: int | None = None
    v: str | None = None

    def __post_init__(self):
        if self.tol <= 0:
            raise InputError("--tol must be positive")
        if self.precision_cap < 128:
            raise InputError("--precision-cap must be at least 128")
        if self.jobs < 1:
            raise InputError("--jobs must be at least 1")

    @property
    def solver_config(self) -> SolverConfig:
        return SolverConfig(tol=self.tol, precision_cap=self.precision_cap)


def dumps(obj) -> str:
    """Canonical JSON: fixed indentation, keys in insertion order, UTF-8 text."""
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def load_sequence(path: str) -> MomentSequence:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    if not text.strip():
        raise InputError(f"{path}: empty input")
    try:
        return MomentSequence.from_json(text)
    except MomentError as exc:
        raise InputError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# commands; each returns (payload dict, exit code)


def cmd_analyze(beta: MomentSequence, cfg: RunConfig):
    rep = decide_extremal(beta, cfg.solver_config)
    return rep.to_dict(), rep.exit_code


def cmd_measure(beta: MomentSequence, cfg: RunConfig):
    rep = decide_extremal(beta, cfg.solver_config)
    out = {
        "verdict": rep.verdict.value,
        "reason": rep.reason,
        "measure": rep.measure.to_dict() if rep.measure else None,
        "witness": rep.witness.to_dict() if rep.witness else None,
    }
    return out, rep.exit_code


def cmd_variety(beta: MomentSequence, cfg: RunConfig):
    mm = build_moment_matrix(beta)
    out = {"n": beta.n, "rank": mm.rank, "relations": [str(r) for r in mm.relations]}
    try:
        vr = compute_variety(mm.relations, cfg.tol)
    except PositiveDimensional as exc:
        out.update({"error": f"PositiveDimensional: {exc}", "card": "inf", "points": []})
        return out, Verdict.OUT_OF_SCOPE.exit_code
    except NoRelations as exc:
        out.update({"error": f"NoRelations: {exc}", "card": "inf", "points": []})
        return out, Verdict.OUT_OF_SCOPE.exit_code
    v = vr.card
    out.update({
        "card": v,
        "variety_condition": "r <= v" if mm.rank <= v else "fails: r > v",
        "extremal": mm.rank == v,
        "quotient_dims": {"relations": vr.relation_quotient_dim, "radical": vr.radical_quotient_dim},
        "points": [p.to_dict() for p in vr.points],
    })
    return out, 0


def cmd_consistency(beta: MomentSequence, cfg: RunConfig):
    rep = decide_extremal(beta, cfg.solver_config)
    mm = build_moment_matrix(beta)
    out = {
        "verdict": rep.verdict.value,
        "recursive": check_recursive(mm).to_dict(),
        "weak_consistency": rep.weak_consistency.to_dict() if rep.weak_consistency else None,
        "relation_battery": rep.relation_battery.to_dict() if rep.relation_battery else None,
        "auxiliaries": [a.to_dict() for a in rep.auxiliaries],
        "consistency": None,
        "full_consistency": rep.full_consistency,
        "witness": rep.witness.to_dict() if rep.witness else None,
    }
    if rep.consistency is not None:
        out["consistency"] = {**rep.consistency.to_dict(),
                              "results": [c.to_dict() for c in rep.consistency.checks]}
    if cfg.polys:
        evals = []
        for text in cfg.polys:
            try:
                p = MultiPoly.parse(text)
            except PolynomialParseError as exc:
                raise InputError(f"--poly {text!r}: {exc}") from None
            entry = {"polynomial": str(p)}
            try:
                entry["riesz_value"] = str(riesz(beta, p))
            except MomentError as exc:
                entry["riesz_value"] = None
                entry["error"] = str(exc)
            if rep.variety:
                entry["vanishes_on_variety"] = vanishes_on(p, rep.variety)
            evals.append(entry)
        out["evaluations"] = evals
    return out, rep.exit_code


def cmd_classify(beta: MomentSequence | None, cfg: RunConfig):
    if beta is None:
        v = None if cfg.v in (None, "inf", "oo", "infinity") else int(cfg.v)
        c = classify(cfg.r, v)
        return c.to_dict(), 0 if c.in_scope else Verdict.OUT_OF_SCOPE.exit_code
    mm = build_moment_matrix(beta)
    v = None
    if mm.relations:
        try:
            v = compute_variety(mm.relations, cfg.tol).card
        except PositiveDimensional:
            v = None
    c = classify(mm.rank, v)
    return c.to_dict(), 0 if c.in_scope else Verdict.OUT_OF_SCOPE.exit_code


_HANDLERS = {
    "analyze": cmd_analyze,
    "variety": cmd_variety,
    "consistency": cmd_consistency,
    "measure": cmd_measure,
    "classify": cmd_classify,
}


def run_one(cfg: RunConfig, path: str | None):
    """Payload and exit code for one input; input errors become code 4."""
    try:
        beta = load_sequence(path) if path is not None else None
        return _HANDLERS[cfg.command](beta, cfg)
    except InputError as exc:
        return {"error": str(exc)}, EXIT_INPUT_ERROR


def _run_path(args):
    cfg, path = args
    return run_one(cfg, path)


# ---------------------------------------------------------------------------
# text rendering


def render_text(command: str, payload: dict) -> str:
    if "error" in payload and len(payload) == 1:
        return f"error: {payload['error']}\n"
    lines = []
    if command == "classify":
        return payload["description"] + "\n"
    if "verdict" in payload:
        lines.append(f"verdict: {payload['verdict']}")
    if payload.get("reason"):
        lines.append(f"reason: {payload['reason']}")
    if "rank" in payload:
        lines.append(f"rank: {payload['rank']}")
    if command == "variety":
        for r in payload["relations"]:
            lines.append(f"relation: {r} = 0")
        if payload.get("error"):
            lines.append(payload["error"])
        lines.append(f"card V: {payload['card']}")
        for p in payload["points"]:
            lines.append(f"  ({_coord(p['x'])}, {_coord(p['y'])})")
        return "\n".join(lines) + "\n"
    cls = payload.get("classification")
    if cls:
        lines.append(f"classification: {cls['description']}")
    case = payload.get("basis_case")
    if case:
        lines.append(f"basis case: {case['tag']}")
    for r in payload.get("relations", []):
        lines.append(f"relation: {r} = 0")
    for a in payload.get("auxiliaries", []):
        lines.append(f"auxiliary s[{a['lead']}] = {a['polynomial']}")
    cons = payload.get("consistency")
    if cons:
        leads = {a["polynomial"]: a["lead"] for a in payload.get("auxiliaries", [])}
        for c in cons["results"]:
            name = leads.get(c["generator"], c["generator"])
            lines.append(f"  Lambda({c['multiplier']} * s[{name}]) = {c['value']}")
    w = payload.get("witness")
    if w:
        lines.append(f"witness ({w['kind']}): Lambda({w['polynomial']}) = {w['riesz_value']}")
    m = payload.get("measure")
    if m:
        lines.append("measure:")
        for a in m["atoms"]:
            lines.append(f"  {a['density']} at ({_coord(a['x'])}, {_coord(a['y'])})")
    for e in payload.get("evaluations", []):
        lines.append(f"Lambda({e['polynomial']}) = {e['riesz_value']}"
                     + (f", vanishes on V: {e['vanishes_on_variety']}" if "vanishes_on_variety" in e else ""))
    for note in payload.get("notes", []):
        lines.append(f"note: {note}")
    return "\n".join(lines) + "\n"


def _coord(c: dict) -> str:
    return c.get("exact") or f"{c['mid']} +- {c['rad']}"


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="momentlab", description="Extremal sextic moment problem solver.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("input", nargs="?" if name == "classify" else None, metavar="INPUT",
                       help="moment sequence JSON file or a directory of them")
        p.add_argument("--tol", type=str, default=None, help="point enclosure radius (default 1e-12)")
        p.add_argument("--precision-cap", type=int, default=None,
                       help=f"interval precision cap in bits (default 1024, or ${PRECISION_ENV})")
        p.add_argument("--format", choices=("json", "text"), default="json")
        p.add_argument("--order", choices=("grlex",), default="grlex")
        p.add_argument("--jobs", type=int, default=1, help="worker processes for a directory")
        if name == "consistency":
            p.add_argument("--poly", action="append", default=[],
                           help="also evaluate the Riesz functional on this polynomial")
        if name == "classify":
            p.add_argument("--r", type=int, help="rank, instead of an input file")
            p.add_argument("--v", type=str, help="variety size or 'inf'")
    return parser


def _config(ns) -> RunConfig:
    try:
        tol = Fraction(ns.tol) if ns.tol is not None else DEFAULT_TOL
    except (ValueError, ZeroDivisionError):
        raise InputError(f"--tol: cannot parse {ns.tol!r}") from None
    if tol <= 0:
        raise InputError(f"--tol: must be positive, got {ns.tol}")
    cap = ns.precision_cap
    if cap is None:
        env = os.environ.get(PRECISION_ENV)
        try:
            cap = int(env) if env else DEFAULT_PRECISION_CAP
        except ValueError:
            raise InputError(f"{PRECISION_ENV}: expected an integer, got {env!r}") from None
    if ns.command == "classify":
        if ns.input is None and ns.r is None:
            raise InputError("classify needs INPUT or --r/--v")
    return RunConfig(
        command=ns.command, input_path=ns.input, tol=tol, precision_cap=cap, output_format=ns.format,
        order=ns.order, jobs=ns.jobs, polys=tuple(getattr(ns, "poly", ()) or ()),
        r=getattr(ns, "r", None), v=getattr(ns, "v", None),
    )


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = _config(ns)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    path = cfg.input_path
    if path is not None and Path(path).is_dir():
        files = sorted(str(p) for p in Path(path).glob("*.json"))
        if cfg.jobs > 1 and len(files) > 1:
            with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
                results = list(pool.map(_run_path, [(cfg, f) for f in files]))
        else:
            results = [run_one(cfg, f) for f in files]
        code = max((c for _, c in results), default=0)
        if cfg.output_format == "json":
            sys.stdout.write(dumps([{"input": Path(f).name, "exit_code": c, "result": p}
                                    for f, (p, c) in zip(files, results)]))
        else:
            for f, (p, c) in zip(files, results):
                sys.stdout.write(f"== {Path(f).name} (exit {c})\n" + render_text(cfg.command, p))
        return code
    payload, code = run_one(cfg, path)
    if code == EXIT_INPUT_ERROR:
        print(f"error: {payload['error']}", file=sys.stderr)
        return code
    if cfg.output_format == "json":
        sys.stdout.write(dumps(payload))
    else:
        sys.stdout.write(render_text(cfg.command, payload))
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
