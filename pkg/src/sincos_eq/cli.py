"""``feq``: run a JSON config of enumerate / solve / verify / factorize tasks.

    feq --config run.json [--tolerance 1e-9] [--window 10] [--report out.json]
    feq --preset dalembert

Exit status is 0 when every checked residual is within tolerance, 1 when
some residual exceeds it, and 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

import numpy as np

from .families import ParameterError, SolutionParams, Theorem, build
from .functions import (
    DEFAULT_TOL,
    AdditiveFunction,
    ExpPolyFunction,
    Exponential,
    GroupFunction,
    TwoGPeriodic,
    UnrealizedFunctionError,
    enumerate_exponentials,
    function_from_json,
)
from .groups import GroupSpec, UnsupportedDomainError, enumerate_elements
from .jsonio import ConfigError, dump_complex, parse_complex
from .measures import Measure
from .solvers import (
    dalembert_measure,
    mu_hat,
    perturb_k,
    reduce_gajda,
    solve_fech,
    solve_wilson_modified,
)
from .verify import (
    DEFAULT_WINDOW,
    Domain,
    EvaluationError,
    Rank1,
    cross_ratio_deviation,
    lhs_matrix,
    rank1_factorize,
    residual_dalem1,
    residual_dalembert_convolution,
    residual_even,
    residual_fech,
    residual_odd,
    residual_sincos,
    residual_wilson_modified,
    sincos_lhs,
)

log = logging.getLogger("feq")

EQUATIONS = ("sincos", "dalem1", "fech", "wilson_modified", "gajda", "dalembert")
TASKS = ("enumerate", "solve", "verify", "factorize")
PRESETS = ("dalembert", "dalembert_perturbed", "fech_z6", "wilson_z8", "combined_z4")

_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_ELEMENT = {"type": "array", "items": {"type": "integer"}}

REPORT_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["equation", "group", "tolerance", "tasks", "families", "all_passed", "timing_s"],
    "properties": {
        "equation": {"enum": list(EQUATIONS)},
        "group": {
            "type": "object",
            "required": ["free_rank", "torsion"],
            "properties": {
                "free_rank": {"type": "integer", "minimum": 0},
                "torsion": {"type": "array", "items": {"type": "integer", "minimum": 1}},
            },
        },
        "window": {"type": ["integer", "null"]},
        "tolerance": {"type": "number", "exclusiveMinimum": 0},
        "tasks": {"type": "array", "items": {"enum": list(TASKS)}},
        "measure": {"type": ["object", "null"]},
        "characters": {"type": "array", "items": _ELEMENT},
        "families": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["theorem", "case", "params"],
                "properties": {
                    "theorem": {"type": "string"},
                    "case": {"type": "string"},
                    "params": {"type": "object"},
                    "residual": {"type": ["number", "null"], "minimum": 0},
                    "argmax": {"oneOf": [{"type": "null"}, {"type": "array", "items": _ELEMENT}]},
                    "passed": {"type": ["boolean", "null"]},
                    "near_threshold": {"type": "boolean"},
                    "mu_hat": {"type": "object", "additionalProperties": _COMPLEX},
                    "factorization": {"type": "object"},
                },
            },
        },
        "all_passed": {"type": "boolean"},
        "timing_s": {"type": "number", "minimum": 0},
    },
}


# -- config parsing -------------------------------------------------------------


def load_config(path: str | Path) -> dict:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be an object")
    return data


def load_preset(name: str) -> dict:
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    text = resources.files("sincos_eq.presets").joinpath(f"{name}.json").read_text()
    return json.loads(text)


def _parse_params(group: GroupSpec, data: Mapping, field: str) -> SolutionParams:
    if not isinstance(data, Mapping):
        raise ConfigError(f"{field}: expected an object")
    kw: dict[str, Any] = {"group": group}
    for k in ("alpha", "beta", "gamma", "delta", "b"):
        if k in data:
            kw[k] = parse_complex(data[k], f"{field}.{k}")
    for k in ("m", "m0"):
        if k in data:
            kw[k] = Exponential.from_json(group, data[k], f"{field}.{k}")
    if "a" in data:
        kw["a"] = AdditiveFunction.from_json(group, data["a"], f"{field}.a")
    if "T" in data:
        kw["T"] = TwoGPeriodic.from_json(group, data["T"], f"{field}.T")
    for k in ("g_arbitrary", "h_arbitrary"):
        if k in data:
            kw[k] = function_from_json(group, data[k], f"{field}.{k}")
    unknown = set(data) - set(kw) - {"group"}
    if unknown:
        raise ConfigError(f"{field}: unknown parameter(s) {sorted(unknown)}")
    return SolutionParams(**kw)


def _parse_exponentials(group: GroupSpec, data: Any) -> list[Exponential] | str:
    if data is None or data == "all":
        return "all"
    if not isinstance(data, list):
        raise ConfigError("exponentials: expected \"all\" or a list of exponentials")
    return [Exponential.from_json(group, e, f"exponentials[{i}]") for i, e in enumerate(data)]


# -- report -------------------------------------------------------------------


def _mu_hat_json(c: complex, cc: complex) -> dict:
    return {"m": dump_complex(c), "m_check": dump_complex(cc)}


def _residual_json(entry: dict, res, tol: float) -> None:
    entry["residual"] = float(res.value)
    entry["argmax"] = [list(res.argmax[0]), list(res.argmax[1])] if res.argmax else None
    entry["passed"] = bool(res.value <= tol)


def _factorize_entry(L, g_fun: GroupFunction, h_fun: GroupFunction, group: GroupSpec) -> dict:
    fac = rank1_factorize(L)
    if not isinstance(fac, Rank1):
        return {"rank1": False, "sigma2": fac.sigma2, "ratio": fac.ratio}
    out: dict = {"rank1": True, "zero": fac.zero}
    if not fac.zero:
        elems = enumerate_elements(group)
        try:
            gv = [g_fun(x) for x in elems]
            hv = [h_fun(x) for x in elems]
        except UnrealizedFunctionError:
            return out
        out["g_deviation"] = cross_ratio_deviation(fac.g, gv)
        out["h_deviation"] = cross_ratio_deviation(fac.h, hv)
    return out


def run_config(
    config: Mapping | str | Path,
    tolerance: float | None = None,
    window: int | None = None,
) -> dict:
    """Execute a config and return the report dict."""
    t0 = time.perf_counter()
    if not isinstance(config, Mapping):
        config = load_config(config)
    if "group" not in config:
        raise ConfigError("group: missing (expected {\"free_rank\": r, \"torsion\": [...]})")
    try:
        group = GroupSpec.from_json(config["group"])
    except (ValueError, TypeError, AttributeError) as exc:
        raise ConfigError(f"group: {exc}") from exc
    tol = float(tolerance if tolerance is not None else config.get("tolerance", DEFAULT_TOL))
    W = int(window if window is not None else config.get("window", DEFAULT_WINDOW))
    equation = config.get("equation", "fech")
    if equation not in EQUATIONS:
        raise ConfigError(f"equation: {equation!r} is not one of {EQUATIONS}")
    tasks = list(config.get("tasks", ["solve", "verify"]))
    for t in tasks:
        if t not in TASKS:
            raise ConfigError(f"tasks: unknown task {t!r}; expected some of {TASKS}")
    domain = Domain(group, W)
    perturb = parse_complex(config.get("perturb", 0), "perturb")

    mu_data = config.get("measure", config.get("mu"))
    if equation == "dalembert":
        mu = dalembert_measure(group)
    elif mu_data is not None:
        mu = Measure.from_json(group, mu_data)
    elif equation in ("sincos", "fech", "wilson_modified", "gajda"):
        raise ConfigError(f"measure: required for equation {equation!r}")
    else:
        mu = None

    report: dict = {
        "equation": equation,
        "group": group.to_json(),
        "window": None if group.is_finite else W,
        "tolerance": tol,
        "tasks": tasks,
        "measure": mu.to_json() if mu is not None else None,
        "families": [],
    }

    if "enumerate" in tasks:
        report["characters"] = [list(m.torsion_roots) for m in enumerate_exponentials(group)]

    params = config.get("params", {})
    if not isinstance(params, Mapping):
        raise ConfigError("params: expected an object")
    pz = lambda k, d: parse_complex(params.get(k, d), f"params.{k}")  # noqa: E731

    # (entry, verifier closure, factorization closure)
    checks: list[tuple[dict, Any, Any]] = []

    if "solve" in tasks:
        exps = _parse_exponentials(group, config.get("exponentials", "all"))
        if equation == "fech":
            a = AdditiveFunction.from_json(group, params["a"], "params.a") if "a" in params else None
            fams = solve_fech(mu, exps, pz("gamma", 1), pz("delta", 1), pz("beta", 1), a, tol)
            for fam in fams:
                k = perturb_k(fam, perturb) if perturb else fam.k
                p = {"m": fam.m.to_json(), "gamma": dump_complex(fam.gamma), "delta": dump_complex(fam.delta),
                     "beta": dump_complex(fam.beta)}
                if fam.a is not None:
                    p["a"] = fam.a.to_json()
                entry = {"theorem": "fech", "case": fam.case, "params": p, "near_threshold": fam.near_threshold,
                         "mu_hat": _mu_hat_json(fam.mu_hat_m, fam.mu_hat_m_check)}
                checks.append((entry, lambda f=fam.f, k=k: residual_fech(f, k, mu, domain),
                               ("sincos", (fam.f, fam.f, fam.f, k))))
        elif equation == "wilson_modified":
            fams = solve_wilson_modified(mu, exps, pz("alpha", 1), tol)
            for fam in fams:
                k = perturb_k(fam, perturb) if perturb else fam.k
                entry = {"theorem": "wilson_modified", "case": fam.case,
                         "params": {"m": fam.m.to_json(), "alpha": dump_complex(fam.alpha)},
                         "near_threshold": fam.near_threshold,
                         "mu_hat": _mu_hat_json(fam.mu_hat_m, fam.mu_hat_m_check)}
                checks.append((entry, lambda f=fam.f, k=k: residual_wilson_modified(f, k, mu, domain),
                               ("sincos", (fam.f, fam.f, k, fam.f))))
        elif equation in ("gajda", "dalembert"):
            cands = enumerate_exponentials(group) if exps == "all" else exps
            for m in cands:
                f = reduce_gajda(mu, m)
                if f.is_zero():
                    continue
                k = f + ExpPolyFunction.monomial(m, perturb) if perturb else f
                entry = {"theorem": equation, "case": "i", "params": {"m": m.to_json()},
                         "near_threshold": False, "mu_hat": _mu_hat_json(mu_hat(mu, m), mu_hat(mu, m.inverse()))}
                if equation == "dalembert" and not perturb:
                    verify = lambda f=f: residual_dalembert_convolution(f, domain)  # noqa: E731
                else:
                    verify = lambda f=f, k=k: residual_fech(f, k, mu, domain)  # noqa: E731
                checks.append((entry, verify, ("sincos", (f, f, f, k))))
        else:
            raise ConfigError(f"solve: no solver for equation {equation!r}; give explicit families")

    for i, fam in enumerate(config.get("families", [])):
        checks.append(_explicit_family(group, equation, fam, f"families[{i}]", mu, domain))

    for entry, verify, factors in checks:
        try:
            if "verify" in tasks:
                _residual_json(entry, verify(), tol)
            if "factorize" in tasks and group.is_finite and factors is not None:
                kind, (f1, f2, g, h) = factors
                if kind == "dalem1":
                    L = lhs_matrix(f1, f2, group)
                else:
                    el = enumerate_elements(group)
                    L = np.array([[sincos_lhs(f1, f2, mu, x, y) for y in el] for x in el], dtype=complex)
                entry["factorization"] = _factorize_entry(L, g, h, group)
        except (EvaluationError, UnrealizedFunctionError) as exc:
            # an arbitrary slot left unfilled is a config problem, not a failed residual
            raise ConfigError(f"{entry['theorem']} case ({entry['case']}): {exc}") from exc
        report["families"].append(entry)

    report["all_passed"] = all(e.get("passed") is not False for e in report["families"])
    report["timing_s"] = time.perf_counter() - t0
    return report


def _explicit_family(group: GroupSpec, equation: str, fam: Mapping, field: str, mu, domain):
    if not isinstance(fam, Mapping):
        raise ConfigError(f"{field}: expected an object")
    if "theorem" in fam and fam["theorem"] in ("even", "odd", "combined"):
        case = fam.get("case")
        params = _parse_params(group, fam.get("params", {}), field + ".params")
        try:
            sol = build(Theorem(fam["theorem"]), case, params, strict=fam.get("strict", True))
        except ParameterError as exc:
            raise ConfigError(f"{field}: {exc}") from exc
        entry = {"theorem": sol.theorem.value, "case": case, "params": params.to_json()}
        fn = sol.functions
        if sol.theorem is Theorem.EVEN:
            return entry, lambda: residual_even(fn["F"], fn["g"], fn["h_e"], domain), None
        if sol.theorem is Theorem.ODD:
            return entry, lambda: residual_odd(fn["H"], fn["g"], fn["h_o"], domain), None
        quad = (fn["F1"], fn["F2"], fn["g"], fn["h"])
        return entry, lambda: residual_dalem1(*quad, domain), ("dalem1", quad)

    funcs = fam.get("functions")
    if not isinstance(funcs, Mapping):
        raise ConfigError(f"{field}: expected 'theorem'/'case'/'params' or 'functions'")
    parsed = {k: function_from_json(group, v, f"{field}.functions.{k}") for k, v in funcs.items()}
    entry = {"theorem": "explicit", "case": fam.get("case", "-"), "params": {k: v for k, v in funcs.items()}}

    def need(*names):
        missing = [n for n in names if n not in parsed]
        if missing:
            raise ConfigError(f"{field}.functions: missing {missing} for equation {equation!r}")
        return [parsed[n] for n in names]

    if equation == "sincos":
        quad = need("f1", "f2", "g", "h")
        return entry, lambda: residual_sincos(*quad, mu, domain), ("sincos", quad)
    if equation == "dalem1":
        quad = need("F1", "F2", "g", "h")
        return entry, lambda: residual_dalem1(*quad, domain), ("dalem1", quad)
    if equation == "wilson_modified":
        f, k = need("f", "k")
        return entry, lambda: residual_wilson_modified(f, k, mu, domain), ("sincos", (f, f, k, f))
    if equation in ("fech", "gajda", "dalembert"):
        f = need("f")[0]
        k = parsed.get("k", f)
        return entry, lambda: residual_fech(f, k, mu, domain), ("sincos", (f, f, f, k))
    raise ConfigError(f"{field}: cannot check explicit functions for {equation!r}")


def format_table(report: dict) -> str:
    lines = [
        f"equation: {report['equation']}   group: {GroupSpec.from_json(report['group'])}   "
        f"tolerance: {report['tolerance']:.1e}"
    ]
    if "characters" in report:
        lines.append(f"characters: {len(report['characters'])}")
    lines.append(f"{'theorem':<16}{'case':<6}{'residual':>12}  {'status':<6} notes")
    for e in report["families"]:
        res = e.get("residual")
        status = "-" if e.get("passed") is None else ("PASS" if e["passed"] else "FAIL")
        notes = []
        if e.get("near_threshold"):
            notes.append("near mu_hat threshold")
        if "mu_hat" in e:
            mh = e["mu_hat"]["m"]
            notes.append(f"mu_hat(m)={complex(*mh):.6g}")
        fac = e.get("factorization")
        if fac is not None:
            notes.append("rank1" if fac.get("rank1") else f"not rank1 (s2={fac.get('sigma2'):.2e})")
        rtxt = f"{res:12.3e}" if res is not None else f"{'-':>12}"
        lines.append(f"{e['theorem']:<16}{e['case']:<6}{rtxt}  {status:<6} {'; '.join(notes)}")
    lines.append(f"all passed: {report['all_passed']}   ({report['timing_s']:.3f} s)")
    return "\n".join(lines)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="feq", description=__doc__.splitlines()[0])
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--config", help="path to a JSON config")
    src.add_argument("--preset", choices=PRESETS, help="run a bundled config")
    parser.add_argument("--tolerance", type=float, default=None, help=f"absolute tolerance (default {DEFAULT_TOL})")
    parser.add_argument("--window", type=int, default=None, help=f"half-width per free coordinate (default {DEFAULT_WINDOW})")
    parser.add_argument("--report", help="write the JSON report here")
    parser.add_argument("--quiet", action="store_true", help="suppress the table")
    parser.add_argument("-v", "--verbose", action="store_true")
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")

    try:
        config = load_preset(args.preset) if args.preset else load_config(args.config)
        report = run_config(config, args.tolerance, args.window)
    except (ConfigError, UnsupportedDomainError, OSError) as exc:
        print(f"feq: error: {exc}", file=sys.stderr)
        return 2

    if args.report:
        Path(args.report).write_text(json.dumps(report, indent=2) + "\n")
    if not args.quiet:
        print(format_table(report))
    return 0 if report["all_passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
