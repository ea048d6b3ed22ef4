"""The ``crn`` command line tool.

Exit codes: 0 success, 1 input or validation error, 2 computation error,
3 refusal because algebraic independence was not established.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing as mp
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import __version__, networks
from .groebner import MonomialOrder, block_extend, buchberger, grevlex, make_order
from .groebner.orders import InvalidOrderMatrix
from .independence import (
    EliminationCapExceeded,
    check_independence,
    elimination_cap,
    independence_elimination_check,
)
from .lift import KeepContainsIntermediate, binomiality, core_invariants, invariants, lift_groebner
from .network import (
    NetworkError,
    ReactionNetwork,
    detect_enzymes,
    load_network,
    parse_network,
    stoichiometric_basis,
    steady_state_ideal,
    steady_state_polynomials,
)
from .reduction import (
    IndependenceNotVerified,
    IntermediateError,
    IntermediateReduction,
    SingularIntermediateSystem,
    TreeCapExceeded,
    detect_intermediates,
    extended_polynomials,
    mu_spanning_tree,
    reduce_network,
    tree_cap,
)

SCHEMA_VERSION = "1"
COMMANDS = ("validate", "reduce", "gb", "lift", "invariants", "binomial", "indep", "bench")

EXIT_OK, EXIT_INPUT, EXIT_COMPUTE, EXIT_GATE = 0, 1, 2, 3


class InputError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    path: str
    intermediates: str = "default"          # "default", "auto", "none" or "list"
    intermediate_list: tuple[str, ...] = ()
    order: str | None = None
    json: bool = False
    time: bool = True
    minimal: bool = False
    compare_direct: bool = False
    cross_check: bool = False
    assume_independent: bool = False
    parallel: bool = False
    keep: tuple[str, ...] = ()
    rate_prefix: str = "kappa"
    core_prefix: str = "k"
    timeout: float | None = None
    skip_direct: bool = False
    tree_cap: int | None = None
    elim_cap: int | None = None

    def __post_init__(self):
        for cap in (self.tree_cap, self.elim_cap):
            if cap is not None and cap <= 0:
                raise InputError("caps must be positive")

    def echo(self) -> dict:
        out = {"name": self.command, "input": self.path, "intermediates": self.intermediates}
        if self.intermediates == "list":
            out["intermediate_list"] = list(self.intermediate_list)
        if self.order:
            out["order"] = self.order
        if self.keep:
            out["keep"] = list(self.keep)
        flags = [f for f in ("minimal", "compare_direct", "cross_check", "assume_independent", "parallel",
                             "skip_direct") if getattr(self, f)]
        out["flags"] = flags
        return out


@dataclass
class RunReport:
    command: dict
    results: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)
    warnings: list[str] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)   # text rendering

    def to_json(self, with_time: bool = True) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "results": self.results,
            "timings": self.timings if with_time else {},
            "warnings": self.warnings,
        }


# helpers -------------------------------------------------------------------

def _load(path: str, rate_prefix: str) -> ReactionNetwork:
    p = Path(path)
    if p.is_file():
        return load_network(p, rate_prefix)
    name = p.name[:-4] if p.name.endswith(".crn") else p.name
    if not p.parent.parts and name in networks.names():
        return parse_network(networks.text(name), rate_prefix)
    raise InputError(f"cannot read {path}: no such file or bundled network")


def parse_order(spec: str | None, variables: Sequence[str]) -> MonomialOrder:
    """``grevlex``, ``lex``, ``KIND:v1,v2,...`` or ``matrix:a,b,..;c,d,..``."""
    if not spec:
        return grevlex(variables)
    kind, _, rest = spec.partition(":")
    kind = kind.strip().lower()
    if kind == "matrix":
        try:
            rows = [[int(x) for x in r.split(",")] for r in rest.split(";") if r.strip()]
        except ValueError as exc:
            raise InputError(f"bad order matrix {rest!r}") from exc
        return make_order("custom", variables, rows)
    if kind not in ("lex", "grevlex"):
        raise InputError(f"unknown order {kind!r}")
    if rest:
        vs = [v.strip() for v in rest.split(",") if v.strip()]
        if sorted(vs) != sorted(variables):
            raise InputError(f"order variables {vs} do not match {list(variables)}")
        variables = vs
    return make_order(kind, variables)


def _select(cfg: RunConfig, N: ReactionNetwork) -> list[str]:
    if cfg.intermediates == "list":
        return list(cfg.intermediate_list)
    if cfg.intermediates == "auto":
        return list(detect_intermediates(N).members)
    if cfg.intermediates == "none":
        return []
    return list(N.intermediates_hint)


def _reduce(cfg: RunConfig, N: ReactionNetwork) -> IntermediateReduction:
    return reduce_network(N, _select(cfg, N), cfg.core_prefix)


def _gate(cfg: RunConfig, R: IntermediateReduction, report: RunReport) -> None:
    if cfg.assume_independent:
        R.mark_independent(forced=True)
        report.warnings.append("algebraic independence assumed, not verified")
        return
    v = check_independence(R)
    if not v.independent:
        raise IndependenceNotVerified("the phi values are algebraically dependent on some overlap class")


def _ms(t0: float) -> float:
    return round((time.perf_counter() - t0) * 1000.0, 3)


def _basis_json(G) -> list[str]:
    return G.strings()


# commands ------------------------------------------------------------------

def _cmd_validate(cfg, N, report):
    dim, _ = stoichiometric_basis(N)
    F = steady_state_polynomials(N)
    try:
        auto = list(detect_intermediates(N).members)
    except IntermediateError:
        auto = []
    report.results = {
        "species": list(N.species_names),
        "variables": list(N.variables),
        "complexes": len(N.complexes),
        "reactions": len(N.reactions),
        "stoichiometric_dimension": dim,
        "enzymes": [s.name for s in detect_enzymes(N)],
        "intermediates_declared": list(N.intermediates_hint),
        "intermediates_detected": auto,
        "steady_state_polynomials": {s: f.to_str() for s, f in zip(N.species_names, F)},
    }
    report.lines += [
        f"species: {len(N.species)}  complexes: {len(N.complexes)}  reactions: {len(N.reactions)}",
        f"dim S = {dim}",
        "detected intermediates: " + (" ".join(auto) or "none"),
    ]
    report.lines += [f"F[{s}] = {f.to_str()}" for s, f in zip(N.species_names, F)]


def _reduction_json(R: IntermediateReduction) -> dict:
    names = R.extended.species_names
    mu = {}
    for (i, c), v in R.mu.entries.items():
        mu.setdefault(R.intermediates.members[i], {})[c.render(names)] = str(v)
    return {
        "intermediates": list(R.intermediates),
        "core": R.core.render(),
        "core_reactions": [
            {"reaction": cr.reaction.render(names), "direct_rate": cr.direct_rate,
             "via_intermediates": cr.via_intermediates, "new": cr.is_new}
            for cr in R.correspondence
        ],
        "mu": mu,
        "phi": {k: str(v) for k, v in R.phi.items()},
        "h": [h.to_str() for h in R.h_polys],
    }


def _cmd_reduce(cfg, N, report):
    t0 = time.perf_counter()
    R = _reduce(cfg, N)
    report.timings["reduction_ms"] = _ms(t0)
    report.results = _reduction_json(R)
    report.warnings += R.warnings
    if cfg.cross_check:
        cap = cfg.tree_cap or tree_cap()
        if len(R.intermediates) > cap:
            report.results["tree_check"] = "skipped"
            report.warnings.append(f"spanning-tree check skipped: more than {cap} intermediates")
        else:
            ok = all(mu_spanning_tree(N, R.intermediates, i, c, cap) == v for (i, c), v in R.mu.entries.items())
            report.results["tree_check"] = "agree" if ok else "disagree"
            if not ok:
                raise ArithmeticError("spanning-tree mu disagrees with the linear solve")
    report.lines.append(R.core.render())
    report.lines += [f"{y}: {m}" for y, row in report.results["mu"].items() for m in [row]]
    report.lines += [f"phi({k}) = {v}" for k, v in report.results["phi"].items()]
    report.lines += [f"H = {h}" for h in report.results["h"]]


def _cmd_gb(cfg, N, report):
    order = parse_order(cfg.order, N.variables)
    gens = [f.with_variables(order.variables) for f in steady_state_ideal(N, cfg.minimal)]
    t0 = time.perf_counter()
    G = buchberger(gens, order) if gens else None
    report.timings["gb_ms"] = _ms(t0)
    basis = _basis_json(G) if G else []
    report.results = {"order": order.to_json(), "size": len(basis), "basis": basis}
    report.lines += basis or ["(empty basis)"]


def _cmd_lift(cfg, N, report):
    R = _reduce(cfg, N)
    report.warnings += R.warnings
    _gate(cfg, R, report)
    Q = parse_order(cfg.order, R.x_vars)
    rep = lift_groebner(R, Q, compare_direct=cfg.compare_direct)
    report.timings.update(rep.timings)
    report.results = {
        "intermediates": list(R.intermediates),
        "order": rep.order_used.to_json(),
        "core_size": len(rep.core_basis),
        "lifted_size": len(rep.lifted_basis),
        "core_basis": _basis_json(rep.core_basis),
        "lifted_basis": _basis_json(rep.lifted_basis),
        "verified": bool(rep.verified),
    }
    if rep.direct_basis is not None:
        report.results["direct_size"] = len(rep.direct_basis)
        report.results["direct_matches"] = rep.direct_matches
    report.lines.append(f"core basis: {len(rep.core_basis)}  lifted basis: {len(rep.lifted_basis)}")
    report.lines += report.results["lifted_basis"]


def _cmd_invariants(cfg, N, report):
    if not cfg.keep:
        raise InputError("--keep is required")
    R = _reduce(cfg, N)
    report.warnings += R.warnings
    _gate(cfg, R, report)
    t0 = time.perf_counter()
    core = core_invariants(R, cfg.keep)
    ext = invariants(R, cfg.keep)
    report.timings["invariants_ms"] = _ms(t0)
    report.results = {
        "keep": [v for v in R.x_vars if v in cfg.keep],
        "core": [f.to_str() for f in core],
        "extended": [f.to_str() for f in ext],
    }
    report.lines += report.results["extended"] or ["(no invariants)"]


def _cmd_binomial(cfg, N, report):
    R = _reduce(cfg, N)
    report.warnings += R.warnings
    _gate(cfg, R, report)
    order = parse_order(cfg.order, R.x_vars)
    t0 = time.perf_counter()
    v = binomiality(R, order)
    report.timings["binomial_ms"] = _ms(t0)
    witness = None
    if v.witness:
        witness = {"intermediate": v.witness[0], "remainder": v.witness[1].to_str(), "terms": len(v.witness[1].terms)}
    report.results = {
        "verdict": v.verdict,
        "core_binomial": v.core_binomial,
        "shortcut_used": v.shortcut_used,
        "remainder_terms": v.remainder_terms,
        "witness": witness,
        "core_basis": _basis_json(v.core_basis),
    }
    report.lines.append(f"verdict: {v.verdict} ({v.shortcut_used})")
    if witness:
        report.lines.append(f"witness {witness['intermediate']}: {witness['remainder']}")


def _cmd_indep(cfg, N, report):
    R = _reduce(cfg, N)
    report.warnings += R.warnings
    t0 = time.perf_counter()
    v = check_independence(R)
    report.timings["independence_ms"] = _ms(t0)
    payload = v.to_json()
    payload["intermediate_components"] = v.classes.intermediate_components
    if cfg.cross_check:
        cap = cfg.elim_cap or elimination_cap()
        checks = []
        for c in v.classes.classes:
            phis = [R.phi[r.rate] for r in c]
            try:
                checks.append(independence_elimination_check(phis, cap))
            except EliminationCapExceeded:
                checks.append(None)
                report.warnings.append(f"elimination check skipped for a class of size {len(c)}")
        payload["elimination_check"] = checks
        if any(ok is not None and ok != v.independent and len(c) > 1
               for ok, c in zip(checks, v.classes.classes)):
            report.warnings.append("elimination check disagrees with the Jacobian verdict")
    report.results = payload
    report.lines.append("independent" if v.independent else "dependent")
    for cl in payload["classes"]:
        report.lines.append(f"  {cl['method']:9s} rank={cl['rank']} {'; '.join(cl['reactions'])}")


# bench ---------------------------------------------------------------------

def _direct_route(text: str, rate_prefix: str, core_prefix: str, Y: list[str], kind: str, q):
    N = parse_network(text, rate_prefix)
    t0 = time.perf_counter()
    if kind == "grevlex":
        order = grevlex(N.variables)
        gens = steady_state_ideal(N)
    else:
        R = reduce_network(N, Y, core_prefix)
        order = block_extend(grevlex(R.x_vars), R.y_vars)
        gens = [f.with_variables(order.variables) for f in extended_polynomials(R).values() if not f.is_zero()]
    G = buchberger(gens, order)
    q.put((len(G), _ms(t0)))


def _start_route(args):
    ctx = mp.get_context("fork") if "fork" in mp.get_all_start_methods() else mp.get_context()
    q = ctx.Queue()
    p = ctx.Process(target=_direct_route, args=(*args, q), daemon=True)
    p.start()
    return p, q


def _collect(p, q, timeout):
    p.join(timeout)
    if p.is_alive():
        p.terminate()
        p.join()
        return {"status": "timeout", "size": None, "ms": None}
    if q.empty():
        return {"status": "error", "size": None, "ms": None}
    size, ms = q.get()
    return {"status": "ok", "size": size, "ms": ms}


def _cmd_bench(cfg, N, report):
    text = N.render()
    Y = _select(cfg, N)
    routes: dict[str, dict] = {}
    pending = {}
    if cfg.skip_direct:
        routes["direct_grevlex"] = {"status": "skipped", "size": None, "ms": None}
        routes["direct_block"] = {"status": "skipped", "size": None, "ms": None}
    else:
        for kind in ("grevlex", "block"):
            args = (text, cfg.rate_prefix, cfg.core_prefix, Y, kind)
            p, q = _start_route(args)
            if cfg.parallel:
                pending[kind] = (p, q)
            else:
                routes[f"direct_{kind}"] = _collect(p, q, cfg.timeout)
    t0 = time.perf_counter()
    R = reduce_network(N, Y, cfg.core_prefix)
    _gate(cfg, R, report)
    rep = lift_groebner(R, verify=False)
    routes["lifted"] = {"status": "ok", "size": len(rep.lifted_basis), "ms": _ms(t0)}
    for kind, (p, q) in pending.items():
        routes[f"direct_{kind}"] = _collect(p, q, cfg.timeout)
    routes = {k: routes[k] for k in ("direct_grevlex", "direct_block", "lifted")}
    for name, r in routes.items():
        report.timings[f"{name}_ms"] = r["ms"]
        line = f"{name:15s} {r['status']:8s} size={r['size']}"
        report.lines.append(line + (f" ms={r['ms']}" if cfg.time else ""))
    report.results = {"routes": {k: {"status": v["status"], "size": v["size"]} for k, v in routes.items()},
                      "intermediates": Y}
    if routes["direct_block"]["status"] == "ok" and routes["direct_block"]["size"] != routes["lifted"]["size"]:
        report.warnings.append("direct block-order basis size differs from the lifted basis")


_DISPATCH = {
    "validate": _cmd_validate,
    "reduce": _cmd_reduce,
    "gb": _cmd_gb,
    "lift": _cmd_lift,
    "invariants": _cmd_invariants,
    "binomial": _cmd_binomial,
    "indep": _cmd_indep,
    "bench": _cmd_bench,
}


def run(cfg: RunConfig) -> tuple[RunReport, int, str | None]:
    """Run one command; returns the report, the exit code and an error message."""
    report = RunReport(cfg.echo())
    saved = {k: os.environ.get(k) for k in ("CRN_TREE_CAP", "CRN_ELIM_CAP")}
    if cfg.tree_cap:
        os.environ["CRN_TREE_CAP"] = str(cfg.tree_cap)
    if cfg.elim_cap:
        os.environ["CRN_ELIM_CAP"] = str(cfg.elim_cap)
    try:
        N = _load(cfg.path, cfg.rate_prefix)
        _DISPATCH[cfg.command](cfg, N, report)
        return report, EXIT_OK, None
    except IndependenceNotVerified as exc:
        return report, EXIT_GATE, str(exc)
    except SingularIntermediateSystem as exc:
        return report, EXIT_COMPUTE, str(exc)
    except (InputError, NetworkError, IntermediateError, KeepContainsIntermediate, InvalidOrderMatrix,
            OSError, UnicodeDecodeError) as exc:
        return report, EXIT_INPUT, str(exc)
    except (ArithmeticError, TreeCapExceeded, EliminationCapExceeded, AssertionError, ValueError) as exc:
        return report, EXIT_COMPUTE, str(exc)
    finally:
        for k, v in saved.items():
            if v is None:
                os.environ.pop(k, None)
            else:
                os.environ[k] = v


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="crn", description="Steady-state ideals of reaction networks with intermediates.")
    ap.add_argument("--version", action="version", version=f"crn {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("file", help="network file, or the name of a bundled network")
        sel = p.add_mutually_exclusive_group()
        sel.add_argument("--intermediates", help="comma-separated intermediate species")
        sel.add_argument("--auto", action="store_true", help="detect intermediates")
        sel.add_argument("--no-intermediates", action="store_true", help="ignore declared intermediates")
        p.add_argument("--order", help="grevlex, lex, KIND:v1,v2,... or matrix:r1;r2;...")
        p.add_argument("--json", action="store_true")
        p.add_argument("--no-time", action="store_true", help="omit timings (stable output)")
        p.add_argument("--minimal", action="store_true", help="use dim(S) generators only")
        p.add_argument("--compare-direct", action="store_true")
        p.add_argument("--cross-check", action="store_true")
        p.add_argument("--assume-independent", action="store_true")
        p.add_argument("--parallel", action="store_true")
        p.add_argument("--keep", help="comma-separated variables to keep")
        p.add_argument("--rate-prefix", default="kappa", help="prefix for unlabelled reactions")
        p.add_argument("--core-prefix", default="k", help="prefix for core rate constants")
        p.add_argument("--timeout", type=float, help="seconds per direct route in bench")
        p.add_argument("--skip-direct", action="store_true", help="bench: lifted route only")
        p.add_argument("--tree-cap", type=int)
        p.add_argument("--elim-cap", type=int)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    if ns.intermediates is not None:
        mode, lst = "list", tuple(s.strip() for s in ns.intermediates.split(",") if s.strip())
    elif ns.auto:
        mode, lst = "auto", ()
    elif ns.no_intermediates:
        mode, lst = "none", ()
    else:
        mode, lst = "default", ()
    keep = tuple(s.strip() for s in ns.keep.split(",") if s.strip()) if ns.keep else ()
    return RunConfig(
        command=ns.command, path=ns.file, intermediates=mode, intermediate_list=lst, order=ns.order,
        json=ns.json, time=not ns.no_time, minimal=ns.minimal, compare_direct=ns.compare_direct,
        cross_check=ns.cross_check, assume_independent=ns.assume_independent, parallel=ns.parallel,
        keep=keep, rate_prefix=ns.rate_prefix, core_prefix=ns.core_prefix, timeout=ns.timeout,
        skip_direct=ns.skip_direct, tree_cap=ns.tree_cap, elim_cap=ns.elim_cap,
    )


def main(argv: Sequence[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
    except InputError as exc:
        print(f"crn: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    report, code, err = run(cfg)
    if err:
        print(f"crn: error: {err}", file=sys.stderr)
    if code == EXIT_OK or cfg.json:
        if cfg.json:
            payload = report.to_json(cfg.time)
            if code != EXIT_OK:
                payload["error"] = {"exit_code": code, "message": err}
            print(json.dumps(payload, indent=2))
        else:
            for line in report.lines:
                print(line)
            if cfg.time and report.timings:
                print("timings (ms): " + ", ".join(f"{k}={v}" for k, v in report.timings.items()))
            for w in report.warnings:
                print(f"warning: {w}", file=sys.stderr)
    return code


def entry() -> int:
    try:
        return main()
    except BrokenPipeError:
        # output piped into a reader that closed early
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(entry())
