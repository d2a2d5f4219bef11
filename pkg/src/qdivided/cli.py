"""Command line entry point: ``qdivided <noun> <verb> ...``.

Reports are canonical JSON (sorted keys, trailing newline) or TSV.  The exit
status is 0 exactly when a report contains no failed check.
"""
from __future__ import annotations

import argparse
import io
import json
import random
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Sequence

from . import suites
from .dalg import DElement, d_derive, d_mul, taylor_expand, to_y_basis
from .dmod import (
    FPModule,
    TruncationTooSmall,
    bound_homology_epsilon,
    bound_spectral_convergence,
    bound_spectral_epsilon,
    bound_unipotent,
    bound_vimod,
    epsilon_lambda,
    hilbert,
    predict_period,
)
from .qarith import QContext, gaussian_binomial_int, is_prime, q_binomial

__all__ = ["main", "emit_table", "RunConfig", "run_verification_grid", "build_parser"]


# ---------------------------------------------------------------------------
# output


def _plain(obj: Any) -> Any:
    """Make numpy scalars, tuples and similar JSON-friendly."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if hasattr(obj, "tolist"):
        return obj.tolist()
    if hasattr(obj, "item"):
        return obj.item()
    return obj


def emit_table(data: Any, fmt: str = "json", columns: Sequence[str] | None = None) -> bytes:
    """Canonical JSON or TSV bytes for ``data``.

    TSV expects a list of row dicts (or a dict with a ``rows`` list); the
    header is ``columns`` or the sorted union of row keys.
    """
    data = _plain(data)
    if fmt == "json":
        return (json.dumps(data, sort_keys=True) + "\n").encode()
    if fmt != "tsv":
        raise ValueError(f"unknown format {fmt!r}")
    rows = data.get("rows", []) if isinstance(data, dict) else data
    if isinstance(data, dict) and "rows" not in data:
        rows = [{"key": k, "value": v} for k, v in sorted(data.items())]
        columns = columns or ["key", "value"]
    cols = list(columns) if columns else sorted({k for r in rows for k in r})
    buf = io.StringIO()
    buf.write("\t".join(cols) + "\n")
    for r in rows:
        cells = []
        for c in cols:
            v = r.get(c, "")
            cells.append(json.dumps(v, sort_keys=True) if isinstance(v, (list, dict)) else str(v))
        buf.write("\t".join(cells) + "\n")
    return buf.getvalue().encode()


def _failed(report: Any) -> bool:
    if isinstance(report, dict):
        if report.get("pass") is False:
            return True
        return any(_failed(v) for v in report.values())
    if isinstance(report, list):
        return any(_failed(v) for v in report)
    return False


# ---------------------------------------------------------------------------
# the verification grid


@dataclass
class RunConfig:
    seed: int = 0
    qs: tuple[int, ...] = (2, 3, 4)
    ells: tuple[int, ...] = (2, 3, 5)
    tmax: int = 3
    nmax: int = 3
    sym_tmax: int = 2
    sym_nmax: int = 5
    lemma_tmax: int = 2
    fmt: str = "json"
    suites: bool = True
    fits: bool = True


def _cell(fn, *args, **kwargs) -> dict:
    """Run one grid cell; budget overruns are recorded, never raised."""
    from .gcoh.ealg import HypothesisViolated, WindowExceeded
    from .gcoh.groups import BudgetExceeded
    from .spechtlab import BudgetExceeded as FlagBudget

    try:
        return fn(*args, **kwargs)
    except (BudgetExceeded, FlagBudget, WindowExceeded, HypothesisViolated) as exc:
        return {"status": "budget", "reason": f"{type(exc).__name__}: {exc}"}


def _algebra_cells(kind: str, q: int | None, ell: int, tmax: int, nmax: int) -> list[dict]:
    from .gcoh.ealg import EAlgebra, unit_constants, verify_free_D, verify_leibniz

    def build():
        E = EAlgebra(kind, ell, tmax, nmax, q)
        units = unit_constants(E, nmax)
        out = [verify_leibniz(E),
               {"check": "unit", "family": kind, "q": E.q, "ell": ell, "values": units,
                "pass": all(u["pass"] for u in units)}]
        out += [verify_free_D(E, t) for t in range(tmax + 1)]
        return out

    res = _cell(build)
    if isinstance(res, dict):
        return [dict(res, family=kind, q=q, ell=ell)]
    return res


def run_verification_grid(cfg: RunConfig) -> dict:
    from .gcoh.ealg import GL_NMAX, inftransfer_instance, verify_mid_portion

    rng = random.Random(cfg.seed)
    cells: list[dict] = []
    for q in cfg.qs:
        for ell in cfg.ells:
            if q % ell == 0:
                continue
            cells += _algebra_cells("GL", q, ell, cfg.tmax, cfg.nmax)
    if 2 in cfg.ells and cfg.sym_nmax >= 0:
        cells += _algebra_cells("Sym", None, 2, cfg.sym_tmax, cfg.sym_nmax)
    lemmas = []
    for q in [q for q in cfg.qs if q in (2, 3)]:
        for ell in cfg.ells:
            if q % ell == 0:
                continue
            for n, m in [(1, 1), (1, 2), (2, 1)]:
                if n + m > min(GL_NMAX, max(cfg.nmax, 2)):
                    continue
                lemmas.append(_cell(verify_mid_portion, n, m, cfg.lemma_tmax, q, ell))
                lemmas.append(_cell(inftransfer_instance, n, m, q, ell, cfg.lemma_tmax))
    props = []
    if cfg.suites:
        props = [
            suites.qpascal_suite(),
            suites.dalg_suite(rng=rng),
            suites.iterated_suite(rng=rng),
            suites.connection_suite(rng=rng),
            suites.invariants_suite(rng=rng),
            suites.bounds_suite(),
            suites.gl_index_suite(),
            suites.specht_suite(fits=cfg.fits),
        ]
    report = {"config": {k: v for k, v in asdict(cfg).items() if k != "fmt"},
              "seed": cfg.seed, "algebra": cells, "lemmas": lemmas, "suites": props}
    failures = sum(_count_failures(x) for x in cells + lemmas + props)
    budget = sum(1 for x in cells + lemmas if x.get("status") == "budget")
    report.update({"failures": failures, "budget_skipped": budget, "pass": failures == 0})
    return report


def _count_failures(entry: dict) -> int:
    return int(entry.get("pass") is False)


def summary_rows(report: dict) -> list[dict]:
    rows = []
    for x in report["algebra"] + report["lemmas"]:
        rows.append({"check": x.get("check", "cell"), "family": x.get("family", "GL"), "q": x.get("q", ""),
                     "ell": x.get("ell", ""), "t": x.get("t", ""), "n": x.get("n", ""), "m": x.get("m", ""),
                     "status": x.get("status") or ("pass" if x.get("pass") else "FAIL")})
    for s in report["suites"]:
        rows.append({"check": s["suite"], "family": "", "q": "", "ell": "", "t": "", "n": s["checked"], "m": "",
                     "status": "pass" if s["pass"] else "FAIL"})
    return rows


# ---------------------------------------------------------------------------
# argument handling


def _ctx_args(p: argparse.ArgumentParser, q_default: int | None = None) -> None:
    p.add_argument("--ell", type=int, required=True, help="prime characteristic of the coefficients")
    p.add_argument("--q", type=int, required=q_default is None, default=q_default, help="the integer q")


def _check_ctx(parser: argparse.ArgumentParser, ell: int | None, q: int | None) -> None:
    if ell is None:
        return
    if not is_prime(ell):
        parser.error(f"--ell {ell} is not prime")
    if q is not None and q % ell == 0:
        parser.error(f"--ell {ell} divides --q {q}; q must be invertible mod ell")


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v.strip())


def _int_map(text: str) -> dict[int, int]:
    return {int(k): int(v) for k, v in json.loads(text).items()}


def _load_json(arg: str) -> Any:
    """Inline JSON or a path to a JSON file."""
    text = arg.strip()
    if text.startswith(("{", "[")):
        return json.loads(text)
    return json.loads(Path(arg).read_text())


class _Sub:
    """Subparser factory that attaches the global options to every parser."""

    def __init__(self, action, common):
        self.action, self.common = action, common

    def add_parser(self, name, **kw):
        return _Parser(self.action.add_parser(name, parents=[self.common], **kw), self.common)


class _Parser:
    def __init__(self, parser, common):
        self.parser, self.common = parser, common

    def add_subparsers(self, **kw):
        return _Sub(self.parser.add_subparsers(**kw), self.common)

    def __getattr__(self, name):
        return getattr(self.parser, name)


def build_parser() -> argparse.ArgumentParser:
    # global options are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", default=argparse.SUPPRESS)
    fmt.add_argument("--tsv", dest="fmt", action="store_const", const="tsv", default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for sampled property checks")
    ap = argparse.ArgumentParser(prog="qdivided", parents=[common],
                                 description="q-divided powers and the cohomology of GL_n(F_q)")
    sub = _Sub(ap.add_subparsers(dest="cmd", required=True), common)

    p = sub.add_parser("qbinom", help="q-binomial coefficient mod ell")
    _ctx_args(p)
    p.add_argument("--integer", action="store_true", help="also print the Gaussian binomial over Z")
    p.add_argument("n", type=int)
    p.add_argument("m", type=int)

    p = sub.add_parser("dalg", help="arithmetic in the q-divided power algebra")
    dsub = p.add_subparsers(dest="verb", required=True)
    for verb, nargs in (("mul", 2), ("derive", 1), ("taylor", 1), ("ybasis", 1)):
        s = dsub.add_parser(verb)
        _ctx_args(s)
        s.add_argument("elements", nargs=nargs, help="JSON list of [degree, coeff]")
        if verb == "derive":
            s.add_argument("--times", type=int, default=1)

    p = sub.add_parser("dmod", help="finitely presented modules and the bound calculators")
    dsub = p.add_subparsers(dest="verb", required=True)
    s = dsub.add_parser("analyze")
    s.add_argument("file")
    s.add_argument("--trunc", type=int, default=40)
    s = dsub.add_parser("bounds")
    bsub = s.add_subparsers(dest="bound", required=True)
    b = bsub.add_parser("vimod")
    _ctx_args(b)
    for name in ("t", "t0", "t1", "delta"):
        b.add_argument(f"--{name}", type=int, required=True)
    b = bsub.add_parser("unipotent")
    _ctx_args(b)
    b.add_argument("--t", type=int, required=True)
    b.add_argument("--d", type=int, required=True)
    b = bsub.add_parser("hom")
    _ctx_args(b)
    b.add_argument("--eps", type=int, nargs=3, required=True, metavar=("E1", "E2", "E3"))
    b.add_argument("--lam", type=int, nargs=2, required=True, metavar=("L1", "L2"))
    b = bsub.add_parser("spectral")
    _ctx_args(b)
    b.add_argument("--t", type=int, required=True)
    grp = b.add_mutually_exclusive_group(required=True)
    grp.add_argument("--k", type=int, help="page offset")
    grp.add_argument("--r", type=int, help="support radius of the first page")
    b.add_argument("--eps1", type=_int_map, required=True, help='JSON map t -> epsilon, e.g. {"0":1}')
    b.add_argument("--fl", type=_int_map, required=True, help="JSON map t -> fl(lambda)")
    b.add_argument("--strict", action="store_true")

    p = sub.add_parser("gcoh", help="group cohomology and the derivation checks")
    gsub = p.add_subparsers(dest="verb", required=True)
    s = gsub.add_parser("dims")
    s.add_argument("group", help="group spec as JSON text or a JSON file")
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--tmax", type=int, default=4)
    s.add_argument("--nmax", type=int, default=3, help="range of n when the group description omits n")
    s = gsub.add_parser("verify")
    s.add_argument("check", choices=["leibniz", "free", "midportion", "inftransfer", "commutativity"])
    s.add_argument("--family", choices=["GL", "Sym"], default="GL")
    s.add_argument("--q", type=int, default=None)
    s.add_argument("--ell", type=int, required=True)
    s.add_argument("--tmax", type=int, default=2)
    s.add_argument("--nmax", type=int, default=3)

    p = sub.add_parser("specht", help="Specht modules over GL_d(F_q)")
    ssub = p.add_subparsers(dest="verb", required=True)
    s = ssub.add_parser("dim")
    s.add_argument("--mu", type=_int_list, required=True)
    _ctx_args(s)
    s = ssub.add_parser("series")
    s.add_argument("--mu", type=_int_list, required=True)
    _ctx_args(s)
    s.add_argument("--t", type=int, default=0)
    s.add_argument("--nmin", type=int, default=1)
    s.add_argument("--nmax", type=int, default=3)
    s = ssub.add_parser("fit")
    s.add_argument("file", help='JSON: {"q":..,"values":[{"n":..,"dim":..}]} or {"q":..,"series":[[n,dim],..]}')

    p = sub.add_parser("verify", help="run the verification grid")
    vsub = p.add_subparsers(dest="verb", required=True)
    s = vsub.add_parser("all")
    s.add_argument("--q", type=_int_list, default=None, help="comma list of q values")
    s.add_argument("--ell", type=_int_list, default=None, help="comma list of primes")
    s.add_argument("--tmax", type=int, default=None)
    s.add_argument("--nmax", type=int, default=None)
    s.add_argument("--no-suites", action="store_true", help="skip the property suites")
    s.add_argument("--no-fits", action="store_true", help="skip the Specht polynomial fits")
    return ap


# ---------------------------------------------------------------------------
# commands


def _elements(args) -> list[DElement]:
    ctx = QContext(args.ell, args.q)
    return [DElement(ctx, json.loads(e)) for e in args.elements]


def _cmd_qbinom(args):
    ctx = QContext(args.ell, args.q)
    out = {"n": args.n, "m": args.m, "ell": args.ell, "q": args.q, "value": q_binomial(args.n, args.m, ctx)}
    if args.integer:
        out["integer"] = gaussian_binomial_int(args.n, args.m, args.q)
    return out


def _cmd_dalg(args):
    els = _elements(args)
    if args.verb == "mul":
        return {"result": d_mul(*els).to_json()}
    if args.verb == "derive":
        return {"result": d_derive(els[0], args.times).to_json()}
    if args.verb == "taylor":
        return {"taylor": [list(p) for p in taylor_expand(els[0])]}
    return {"ybasis": [{"coeff": c, "monomial": [list(e) for e in mono.exponents], "text": repr(mono)}
                       for c, mono in to_y_basis(els[0])]}


def _cmd_dmod(args, parser):
    if args.verb == "analyze":
        M = FPModule.from_json(_load_json(args.file))
        N = args.trunc
        out = {"hilbert": hilbert(M, N), "certified_to": N}
        try:
            inv = epsilon_lambda(M, N)
            cert = predict_period(M, N)
            out.update({"epsilon": inv.epsilon, "lambda": inv.lam, "period": cert.period,
                        "onset": cert.onset, "pass": cert.ok})
        except TruncationTooSmall as exc:
            out.update({"epsilon": None, "lambda": None, "period": None, "onset": None, "error": str(exc)})
        return out
    _check_ctx(parser, args.ell, args.q)
    ctx = QContext(args.ell, args.q)
    if args.bound == "vimod":
        b = bound_vimod(args.t, args.t0, args.t1, args.delta, ctx)
        return {"lambda": b.lambda_bound, "epsilon": b.epsilon_bound, "onset": b.onset, "period": b.period}
    if args.bound == "unipotent":
        b = bound_unipotent(args.t, args.d, ctx)
        return {"s": b.s, "period": b.period, "onset": b.onset}
    if args.bound == "hom":
        return {"epsilon": bound_homology_epsilon(*args.eps, *args.lam, ctx)}
    if args.k is not None:
        return {"epsilon": bound_spectral_epsilon(args.t, args.eps1, args.fl, args.k, args.strict)}
    return {"epsilon": bound_spectral_convergence(args.r, args.t, args.eps1, args.fl, args.strict)}


def _cmd_gcoh(args, parser):
    from .gcoh import ealg
    from .gcoh.cohomology import cohomology
    from .gcoh.groups import group_from_spec

    if args.verb == "dims":
        spec = _load_json(args.group)
        if spec.get("family") in ("GL", "Sym") and "n" not in spec:
            specs = [dict(spec, n=n) for n in range(1, args.nmax + 1)]
        else:
            specs = [spec]
        rows = []
        for s in specs:
            G = group_from_spec(s)
            for t in range(args.tmax + 1):
                rows.append({"n": s.get("n", ""), "t": t, "dim": cohomology(G, t, args.ell).dim})
        return {"rows": rows}, ["n", "t", "dim"]
    if args.family == "GL":
        if args.q is None:
            parser.error("--q is required for the GL family")
        _check_ctx(parser, args.ell, args.q)
    if args.check in ("midportion", "inftransfer"):
        if args.family != "GL":
            parser.error(f"{args.check} is defined for the GL family")
        out = []
        for s in range(2, args.nmax + 1):
            for n in range(1, s):
                if args.check == "midportion":
                    out.append(_cell(ealg.verify_mid_portion, n, s - n, args.tmax, args.q, args.ell))
                else:
                    out.append(_cell(ealg.inftransfer_instance, n, s - n, args.q, args.ell, args.tmax))
        return {"check": args.check, "results": out, "pass": not _failed(out)}, None
    E = ealg.EAlgebra(args.family, args.ell, args.tmax, args.nmax, args.q)
    if args.check == "leibniz":
        return ealg.verify_leibniz(E), None
    if args.check == "free":
        res = [ealg.verify_free_D(E, t) for t in range(args.tmax + 1)]
        return {"check": "free", "results": res, "pass": not _failed(res)}, None
    return ealg.commutativity_report(E), None


def _cmd_specht(args, parser):
    from . import spechtlab

    if args.verb == "fit":
        data = _load_json(args.file)
        if "values" in data:
            series = [(v["n"], v["dim"]) for v in data["values"]]
        else:
            series = [tuple(v) for v in data["series"]]
        try:
            return spechtlab.fit_dimension_polynomial(series, int(data["q"])).to_json()
        except spechtlab.NoStablePolynomial as exc:
            return {"error": str(exc), "pass": False}
    _check_ctx(parser, args.ell, args.q)
    if args.verb == "dim":
        mu = tuple(args.mu)
        return {"mu": list(mu), "q": args.q, "ell": args.ell, "dim": spechtlab.specht_dim(mu, args.q, args.ell)}
    return spechtlab.specht_cohomology_series(args.mu, args.t, range(args.nmin, args.nmax + 1), args.q, args.ell)


def _cmd_verify(args, parser):
    cfg = RunConfig(seed=args.seed, fmt=args.fmt, suites=not args.no_suites, fits=not args.no_fits)
    if args.q:
        cfg.qs = args.q
    if args.ell:
        for ell in args.ell:
            _check_ctx(parser, ell, None)
        if args.q and all(q % ell == 0 for q in args.q for ell in args.ell):
            parser.error("every requested ell divides every requested q")
        cfg.ells = args.ell
    if args.tmax is not None:
        cfg.tmax = cfg.sym_tmax = cfg.lemma_tmax = args.tmax
    if args.nmax is not None:
        cfg.nmax = cfg.sym_nmax = args.nmax
    report = run_verification_grid(cfg)
    if args.fmt == "tsv":
        return {"rows": summary_rows(report), "pass": report["pass"]}, \
            ["check", "family", "q", "ell", "t", "n", "m", "status"]
    return report, None


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.fmt = getattr(args, "fmt", "json")
    args.seed = getattr(args, "seed", 0)
    columns = None
    if args.cmd in ("qbinom", "dalg"):
        _check_ctx(parser, args.ell, args.q)
        out = _cmd_qbinom(args) if args.cmd == "qbinom" else _cmd_dalg(args)
    elif args.cmd == "dmod":
        out = _cmd_dmod(args, parser)
    elif args.cmd == "gcoh":
        out, columns = _cmd_gcoh(args, parser)
    elif args.cmd == "specht":
        out = _cmd_specht(args, parser)
    else:
        out, columns = _cmd_verify(args, parser)
    if args.fmt == "tsv" and isinstance(out, dict) and "rows" in out:
        sys.stdout.buffer.write(emit_table(out["rows"], "tsv", columns))
    else:
        sys.stdout.buffer.write(emit_table(out, args.fmt, columns))
    sys.stdout.flush()
    return 1 if _failed(out) else 0


if __name__ == "__main__":
    sys.exit(main())
