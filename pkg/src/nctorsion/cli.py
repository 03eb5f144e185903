"""Command-line front end: det, torsion, zeta, novikov, verify and corpus."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path

from .chain import ChainComplexError, compare_milnor_turaev, reidemeister_torsion, torsion_milnor
from .fileio import InputError, load, read_json
from .linalg import PIVOT_STRATEGIES, HypothesisError, SingularMatrixError, dieudonne_det
from .morse import ModelError, canonical_series, factorization_check, novikov_K, novikov_torsion, verify_main_theorem
from .novikov import PrecisionError, compare_truncated
from .values import TorsionValue, Verdict
from .zeta import OrbitError, zeta_exp, zeta_product

REPORT_VERSION = 1
COMMANDS = ("det", "torsion", "zeta", "novikov", "verify", "corpus")

log = logging.getLogger("nctorsion")


@dataclass
class RunConfig:
    command: str
    input_path: str
    max_degree: int = 16
    pivot: str = "valuation"
    output_format: str = "text"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        if self.max_degree < 1:
            raise ValueError("max degree must be >= 1")
        if self.pivot not in PIVOT_STRATEGIES:
            raise ValueError(f"pivot strategy must be one of {', '.join(PIVOT_STRATEGIES)}")
        if self.output_format not in ("text", "json"):
            raise ValueError("format must be text or json")


def value_report(v: TorsionValue, k: int) -> dict:
    s = v.value
    val, cls = v.invariants
    canon = canonical_series(v)
    return {
        "value": s.render(),
        "ambiguity": v.ambiguity.render(),
        "valuation": val,
        "leading_class": cls.render(),
        "canonical": canon.render(),
        "coefficients": _coeffs(canon, k),
    }


def _coeffs(s, k: int) -> list[str]:
    out = []
    for n in range(0, k + 1):
        try:
            out.append(s.coeff(n).render())
        except PrecisionError:
            break
    return out


def _report(config: RunConfig, **body) -> dict:
    return {"format": "nctorsion/report", "version": REPORT_VERSION, "command": config.command,
            "input": config.input_path, "max_degree": config.max_degree, **body}


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_det(config: RunConfig) -> tuple[int, dict]:
    _, m = load(config.input_path, "matrix")
    det = dieudonne_det(m, config.pivot)
    return 0, _report(config, value=det.value.render(), sign=det.sign, pivots=det.log)


def cmd_torsion(config: RunConfig) -> tuple[int, dict]:
    kind, obj = load(config.input_path, "complex|cw")
    k = config.max_degree
    if kind == "cw":
        tau = reidemeister_torsion(obj, k, config.pivot)
        return 0, _report(config, kind="cw", torsion=value_report(tau, k), pivots=tau.log)
    c, h = obj
    tau = torsion_milnor(c, h, config.pivot)
    body = {"kind": "complex", "torsion": value_report(tau, k), "pivots": tau.log}
    code = 0
    if h is None:
        cmp = compare_milnor_turaev(c, k)
        body["turaev_check"] = {"verdict": str(cmp.verdict), "reason": cmp.reason}
        code = 0 if cmp.verdict == Verdict.EQUAL else 1
    return code, _report(config, **body)


def cmd_zeta(config: RunConfig) -> tuple[int, dict]:
    _, orbits = load(config.input_path, "orbits")
    k = config.max_degree
    if orbits.complete_through is not None:
        k = min(k, orbits.complete_through)
    prod = zeta_product(orbits, k)
    expo = zeta_exp(orbits, k)
    ok = compare_truncated(prod, expo, k)
    return (0 if ok else 1), _report(
        config, degree=k, zeta=prod.render(),
        slices={str(d): prod.slice(d).render() for d in range(0, k + 1)},
        exp_form_agrees=ok, orbit_counts={str(d): n for d, n in orbits.counts_by_degree().items()})


def cmd_novikov(config: RunConfig) -> tuple[int, dict]:
    _, model = load(config.input_path, "model")
    model.validate()
    k = config.max_degree
    data = novikov_K(model, k + 1)
    tau = novikov_torsion(model, k + 1, data)
    fac = factorization_check(model, k)
    ok = data.squares_vanish() and fac.verdict == Verdict.EQUAL
    return (0 if ok else 1), _report(
        config, K={str(i): m.render() for i, m in data.K.items()}, squares_vanish=data.squares_vanish(),
        novikov_torsion=value_report(tau, k),
        factorization={"verdict": str(fac.verdict), "reason": fac.reason,
                       "lhs": value_report(fac.lhs, k), "rhs": value_report(fac.rhs, k)})


def cmd_verify(config: RunConfig) -> tuple[int, dict]:
    _, model = load(config.input_path, "model")
    k = config.max_degree
    rep = verify_main_theorem(model, k)
    body = {
        "model": model.name,
        "verdict": str(rep.verdict),
        "reason": rep.reason,
        "lhs": value_report(rep.lhs, k),
        "rhs": value_report(rep.rhs, k),
        "zeta": rep.zeta.render(),
        "novikov_torsion": value_report(rep.novikov, k),
        "orbits": rep.enumeration.orbits.table(),
        "cycles": len(rep.enumeration.cycles),
        "pivots": rep.lhs.log,
        "working_precision": rep.working_precision,
    }
    return (0 if rep.verdict == Verdict.EQUAL else 1), _report(config, **body)


_DISPATCH = {"det": cmd_det, "torsion": cmd_torsion, "zeta": cmd_zeta, "novikov": cmd_novikov,
             "verify": cmd_verify}

_DOMAIN_ERRORS = (InputError, ModelError, OrbitError, ChainComplexError, SingularMatrixError, PrecisionError,
                  HypothesisError, ValueError)


def run(config: RunConfig) -> tuple[int, dict]:
    if config.command == "corpus":
        return corpus_run(config)
    try:
        return _DISPATCH[config.command](config)
    except _DOMAIN_ERRORS as exc:
        return 2, _report(config, error=f"{type(exc).__name__}: {exc}")


# ---------------------------------------------------------------------------
# corpus
# ---------------------------------------------------------------------------

SIDECAR_SUFFIX = ".expected.json"
INPUT_SUFFIXES = (".model", ".orbits", ".matrix", ".complex", ".cw")


def _check_expected(report: dict, expected: dict) -> list[str]:
    """Mismatches between a report and the dotted-path expectations of a sidecar."""
    problems = []
    for path, want in expected.items():
        cur = report
        for part in path.split("."):
            if isinstance(cur, dict) and part in cur:
                cur = cur[part]
            else:
                cur = None
                break
        if isinstance(want, list) and isinstance(cur, list):
            got = cur[: len(want)]
        else:
            got = cur
        if got != want:
            problems.append(f"{path}: expected {want!r}, got {got!r}")
    return problems


def corpus_run(config: RunConfig) -> tuple[int, dict]:
    root = Path(config.input_path)
    if not root.is_dir():
        return 2, _report(config, error=f"{root} is not a directory")
    rows = []
    failed = False
    for path in sorted(p for p in root.iterdir() if p.suffix in INPUT_SUFFIXES):
        sidecar = path.with_name(path.name + SIDECAR_SUFFIX)
        if not sidecar.exists():
            log.warning("no sidecar for %s; skipped", path.name)
            rows.append({"input": path.name, "status": "skipped", "detail": "missing sidecar"})
            continue
        try:
            side = read_json(sidecar)
            sub = RunConfig(side["command"], str(path), int(side.get("max_degree", config.max_degree)),
                            side.get("pivot", config.pivot), "json")
            code, rep = _DISPATCH[sub.command](sub)
            problems = _check_expected(rep, side.get("expected", {}))
            status = "ok" if not problems and code == int(side.get("exit_code", 0)) else "mismatch"
            if code != int(side.get("exit_code", 0)):
                problems.append(f"exit code {code}")
            row = {"input": path.name, "status": status, "command": sub.command,
                   "verdict": rep.get("verdict", rep.get("turaev_check", {}).get("verdict")),
                   "oracle": side.get("oracle", ""), "detail": "; ".join(problems)}
        except (*_DOMAIN_ERRORS, KeyError) as exc:
            row = {"input": path.name, "status": "error", "detail": f"{type(exc).__name__}: {exc}"}
        failed |= row["status"] in ("mismatch", "error")
        rows.append(row)
    return (1 if failed else 0), _report(config, entries=rows,
                                         summary={s: sum(r["status"] == s for r in rows)
                                                  for s in ("ok", "mismatch", "error", "skipped")})


# ---------------------------------------------------------------------------
# text rendering and entry point
# ---------------------------------------------------------------------------


def render_text(report: dict) -> str:
    lines = []
    if "error" in report:
        return f"error: {report['error']}"
    cmd = report["command"]
    if cmd == "det":
        lines.append(f"det = {report['value']}" + ("" if report["sign"] > 0 else "  (row swaps: sign -1)"))
    elif cmd == "torsion":
        t = report["torsion"]
        lines.append(f"torsion = [{t['value']}] mod {t['ambiguity']}")
        lines.append(f"canonical series: {', '.join(t['coefficients'])}")
        if "turaev_check" in report:
            lines.append(f"Turaev cross-check: {report['turaev_check']['verdict']}")
    elif cmd == "zeta":
        lines.append(f"zeta = {report['zeta']}")
        lines.append(f"exponential form agrees: {report['exp_form_agrees']}")
    elif cmd == "novikov":
        lines.append(f"Novikov torsion = [{report['novikov_torsion']['value']}]")
        lines.append(f"K_(i-1) K_i = 0: {report['squares_vanish']}")
        lines.append(f"factorization: {report['factorization']['verdict']}")
    elif cmd == "verify":
        lines.append(f"{report['verdict']}: {report['reason']}")
        lines.append(f"lhs: {', '.join(report['lhs']['coefficients'])}")
        lines.append(f"rhs: {', '.join(report['rhs']['coefficients'])}")
        lines.append(f"orbit records: {len(report['orbits'])}; cycles: {report['cycles']}")
    elif cmd == "corpus":
        for r in report["entries"]:
            extra = f"  {r['detail']}" if r.get("detail") else ""
            lines.append(f"{r['status']:8} {r['input']:40} {r.get('verdict') or ''}{extra}")
        lines.append(" ".join(f"{k}={v}" for k, v in report["summary"].items()))
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nctorsion", description="Exact twisted torsion and zeta computations.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("input", help="input file (a directory for corpus)")
    p.add_argument("-k", "--max-degree", type=int, default=16, help="comparison degree k (default 16)")
    p.add_argument("--pivot", choices=PIVOT_STRATEGIES, default="valuation")
    p.add_argument("--format", choices=("text", "json"), default="text", dest="output_format")
    return p


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(args.command, args.input, args.max_degree, args.pivot, args.output_format)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    code, report = run(config)
    if config.output_format == "json":
        print(json.dumps(report, indent=2))
    else:
        print(render_text(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
