"""Command-line front end: ``eulercount <command> ...`` prints JSON on stdout.

Exit status is 0 on success, 1 on a domain error (message on stderr) and 2
on a malformed command line.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import chain, fixtures, gadgets, kotzig, reductions, synthesis
from .config import RunConfig, load_config
from .counting import count_closed, count_vr
from .experiments import closure_sample, region_scan
from .graph import ATRAIL, GENERAL, MapError, MixedMap, load_map
from .region import RegionS
from .report import render_csv, render_json
from .signature import Signature, glue_build, glue_signature, signature_of

COUNT_MODES = {"et": GENERAL, "general": GENERAL, "atrail": ATRAIL, "a-trail": ATRAIL}
GADGET_KINDS = ("smg", "sgg", "xyy", "oxy", "q", "deg4map", "shuffle", "crossover")


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def _emit(out, result, csv_rows=None, columns=None):
    if csv_rows is not None:
        out.write(render_csv(csv_rows, columns))
    else:
        out.write(render_json(result) + "\n")


def _write_map(path: str, m: MixedMap):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(m.to_json() + "\n")


def _map_payload(args, m: MixedMap) -> dict:
    """Either embed the map or write it to --out and report the path."""
    if getattr(args, "out", None):
        _write_map(args.out, m)
        return {"map_file": args.out, "n_vertices": m.n_vertices}
    return {"map": m.to_dict()}


def _signature_arg(text: str):
    """A map file path, or a triple written ``a,b,c``."""
    if os.path.exists(text):
        return load_map(text)
    parts = text.split(",")
    if len(parts) != 3:
        raise MapError(f"{text!r} is neither a file nor a triple a,b,c")
    return Signature.parse(parts)


def _region(cfg: RunConfig, args) -> RegionS:
    prec = args.prec if getattr(args, "prec", None) is not None else cfg.precision
    tol = args.tol if getattr(args, "tol", None) is not None else cfg.tol
    return RegionS(prec, tol)


def _fractions(items: Sequence[str]) -> List[Fraction]:
    return [Fraction(x) for x in items]


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_count(args, cfg, out):
    m = load_map(args.file)
    mode = COUNT_MODES[args.mode]
    workers = cfg.threads
    if m.is_closed:
        n = count_closed(m, mode, engine=args.engine, workers=workers, modulus=args.modulus)
        res = {"mode": args.mode, "count": str(n)}
        if args.modulus:
            res["modulus"] = args.modulus
        _emit(out, res)
    else:
        table = count_vr(m, mode, engine=args.engine, workers=workers, modulus=args.modulus)
        if args.csv:
            _emit(out, None, table.to_rows(), ["type", "count"])
        else:
            _emit(out, {"mode": args.mode, "table": table.to_rows(), "total": str(table.total())})
    return 0


def _blueprint(args) -> gadgets.Blueprint:
    kind = args.kind
    need = {"xyy": ("k",), "oxy": ("p", "k"), "q": ("d", "p"), "shuffle": ("d", "layers"),
            "crossover": ("p",)}.get(kind, ())
    params = {}
    for name in need:
        v = getattr(args, name)
        if v is None:
            raise UsageError(f"gadget {kind} needs --{name}")
        params["T" if name == "layers" else name] = v
    return gadgets.Blueprint(kind, params)


def cmd_gadget(args, cfg, out):
    if args.action == "build":
        if args.kind == "smg":
            m = gadgets.smg()
        elif args.kind == "sgg":
            m = gadgets.sgg()
        else:
            bp = _blueprint(args)
            m = gadgets.build_q(bp.params["d"], bp.params["p"], realize=True).flatten() \
                if args.kind == "q" else bp.build()
        if args.out:
            _write_map(args.out, m)
            _emit(out, {"map_file": args.out, "n_vertices": m.n_vertices})
        else:
            out.write(m.to_json() + "\n")
        return 0
    if args.kind in ("smg", "sgg"):
        sig = signature_of(gadgets.smg() if args.kind == "smg" else gadgets.sgg())
        want = Fraction(1, 2) if args.kind == "smg" else Fraction(1, 3)
        rep = {"kind": args.kind, "signature": sig, "pass": sig.alpha == want}
    else:
        bp = _blueprint(args)
        if args.kind == "shuffle" and bp.params["d"] * bp.params["T"] > cfg.budget:
            raise MapError(f"d*T exceeds the budget {cfg.budget}")
        rep = gadgets.verify(bp)
    _emit(out, rep)
    return 0 if rep["pass"] else 1


def cmd_reduce(args, cfg, out):
    g = load_map(args.input)
    if args.action == "to4regular":
        threshold = args.threshold
        if args.primes == "auto":
            rep = reductions.et_via_crt(g, threshold, workers=cfg.threads)
            _emit(out, rep)
            return 0
        if args.primes:
            primes = [int(x) for x in args.primes.split(",")]
            rep = reductions.et_via_crt(g, threshold, primes, workers=cfg.threads)
            _emit(out, rep)
            return 0
        if args.p is None:
            raise UsageError("to4regular needs --p P or --primes")
        net = reductions.expand_to_4regular(g, args.p, threshold, realize=True)
        m = net.flatten()
        prof = reductions.DegreeProfile.of(g, threshold)
        manifest = {"p": args.p, "threshold": threshold, "profile": {str(k): v for k, v in prof.counts.items()},
                    "factor": str(prof.factor()), "components": len(net.components)}
        res = {"manifest": manifest}
        res.update(_map_payload(args, m))
        _emit(out, res)
        return 0
    if args.action == "planar":
        if args.p is None:
            raise UsageError("planar needs --p P")
        m, crossings = reductions.planarize(g, args.p, seed=args.seed if args.seed is not None else cfg.seed)
        res = {"manifest": crossings}
        if args.count:
            res["count_mod_p"] = count_closed(m, engine="merge", parts=crossings.parts, modulus=args.p)
        res.update(_map_payload(args, m))
        _emit(out, res)
        return 0
    if args.action == "atrails":
        m = reductions.to_atrail_instance(g)
        res = {"manifest": {"factor": str(2 ** g.n_vertices), "n_vertices": m.n_vertices}}
        res.update(_map_payload(args, m))
        _emit(out, res)
        return 0
    # ap
    if args.eps is None:
        raise UsageError("ap needs --eps E")
    C = args.const if args.const is not None else cfg.C
    if args.estimate:
        est = reductions.estimate_et(g, args.eps, C=C)
        _emit(out, {"eps": args.eps, "C": C, "estimate": est, "estimate_float": float(est)})
        return 0
    inst = reductions.ap_instance(g, args.eps, C)
    res = {"manifest": inst}
    res.update(_map_payload(args, inst.graph))
    _emit(out, res)
    return 0


def cmd_kotzig(args, cfg, out):
    m = load_map(args.file)
    fs = kotzig.trace_faces(m, require_plane=True)
    n = kotzig.count_atrails_plane(m, black=args.black)
    _emit(out, {"atrails": str(n), "faces": len(fs.faces), "genus": fs.genus})
    return 0


def cmd_fixture(args, cfg, out):
    if args.name == "list":
        _emit(out, {"fixtures": fixtures.fixture_names()})
        return 0
    m = fixtures.named(args.name)
    if getattr(args, "out", None):
        _write_map(args.out, m)
        _emit(out, {"map_file": args.out, "n_vertices": m.n_vertices})
    else:
        out.write(m.to_json() + "\n")
    return 0


def cmd_sig(args, cfg, out):
    if args.action == "of":
        _emit(out, signature_of(load_map(args.file)))
        return 0
    if args.action == "glue":
        a, b = _signature_arg(args.a), _signature_arg(args.b)
        if isinstance(a, MixedMap) and isinstance(b, MixedMap):
            g = glue_build(a, b)
            res = {"signature": signature_of(g)}
            if args.out:
                _write_map(args.out, g)
                res["map_file"] = args.out
            _emit(out, res)
            return 0
        a = signature_of(a) if isinstance(a, MixedMap) else a
        b = signature_of(b) if isinstance(b, MixedMap) else b
        _emit(out, {"signature": glue_signature(a, b)})
        return 0
    if args.action == "region":
        return cmd_region(args, cfg, out)
    target = _fractions(args.target)
    if args.action == "synth-map":
        m, tr = synthesis.synthesize_map_gadget(target, build=not args.no_build)
    else:
        if args.eps is None:
            raise UsageError("synth-graph needs --eps E")
        m, tr = synthesis.synthesize_graph_gadget(target, args.eps, build=not args.no_build,
                                                  size_cap=cfg.size_cap, region=_region(cfg, args))
    res = {"signature": tr.replay_signature(), "n_vertices": tr.n_vertices(), "trace": tr}
    if m is not None:
        res.update(_map_payload(args, m))
    _emit(out, res)
    return 0


def cmd_region(args, cfg, out):
    s = Signature(*_fractions(args.target))
    reg = _region(cfg, args)
    res = {"class": reg.classify(s.as_tuple())}
    if args.margin:
        res["margin"] = float(reg.margin(s.as_tuple()))
    _emit(out, res)
    return 0


def cmd_experiment(args, cfg, out):
    reg = _region(cfg, args)
    if args.action == "region-scan":
        rep = region_scan(args.n, allow_loops=args.loops, dedup=args.dedup, region=reg, keep_rows=args.csv)
        if args.csv:
            _emit(out, None, rep.rows, ["alpha", "beta", "gamma", "class", "vertices"])
        else:
            _emit(out, rep)
        return 0
    seed = args.seed if args.seed is not None else cfg.seed
    rep = closure_sample(args.trials, seed, region=reg)
    _emit(out, rep)
    return 0


def cmd_chain(args, cfg, out):
    if args.action == "calibrate":
        if args.d is None:
            C, rows = chain.calibrate()
            _emit(out, {"C": C, "grid": rows})
            return 0
        if args.eps is None:
            raise UsageError("chain calibrate --d D needs --eps E")
        C = args.const if args.const is not None else cfg.C
        _emit(out, chain.mixing_report(args.d, args.eps, C))
        return 0
    if args.d is None or args.layers is None:
        raise UsageError("chain needs --d D and --layers T")
    dist = chain.chain_distribution(args.d, args.layers)
    tv = chain.tv_to_uniform(dist)
    res = {"d": args.d, "T": args.layers, "tv": str(tv), "tv_float": float(tv),
           "support": len(dist.probs), "exact": dist.exact}
    if args.eps is not None:
        bound = Fraction(args.eps) / math.factorial(args.d)
        res["bound"] = float(bound)
        res["within_bound"] = bool(tv <= (bound if dist.exact else float(bound) + 1e-12))
    _emit(out, res)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, help="JSON config file (else $EULERCOUNT_CONFIG)")
    p.add_argument("--threads", type=int, default=S)
    p.add_argument("--seed", type=int, default=S)
    p.add_argument("--csv", action="store_true", default=S, help="CSV rows instead of JSON where offered")
    p.add_argument("--out", default=S, help="write the produced map here")
    return p


def _region_opts(p):
    p.add_argument("--tol", type=float)
    p.add_argument("--prec", type=int)


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="eulercount", parents=[common],
                                 description="Exact counting of Eulerian tours, A-trails and gadget signatures.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="count tours (closed map) or a VR table (gadget)")
    p.add_argument("file")
    p.add_argument("--mode", choices=sorted(COUNT_MODES), default="et")
    p.add_argument("--engine", choices=("brute", "merge"), default="brute")
    p.add_argument("--modulus", type=int)
    p.set_defaults(fn=cmd_count)

    p = sub.add_parser("gadget", parents=[common], help="build or verify a gadget")
    p.add_argument("action", choices=("build", "verify"))
    p.add_argument("kind", choices=GADGET_KINDS)
    for name in ("k", "p", "d", "layers"):
        p.add_argument(f"--{name}", type=int)
    p.set_defaults(fn=cmd_gadget)

    p = sub.add_parser("reduce", parents=[common], help="hardness reductions")
    p.add_argument("action", choices=("to4regular", "planar", "atrails", "ap"))
    p.add_argument("--input", required=True)
    p.add_argument("--p", type=int)
    p.add_argument("--primes", help="'auto' or a comma list: run the full CRT pipeline")
    p.add_argument("--threshold", type=int, default=reductions.DEFAULT_THRESHOLD,
                   help="replace vertices of at least this degree (6 default, 4 for test mode)")
    p.add_argument("--eps", type=float)
    p.add_argument("--const", type=float, help="layer constant C (default from config)")
    p.add_argument("--count", action="store_true", help="planar: also count the result mod p")
    p.add_argument("--estimate", action="store_true", help="ap: run the estimator with the exact oracle")
    p.set_defaults(fn=cmd_reduce)

    p = sub.add_parser("kotzig", parents=[common], help="A-trails of a plane 4-regular map")
    p.add_argument("file")
    p.add_argument("--black", type=int, choices=(0, 1), default=1)
    p.set_defaults(fn=cmd_kotzig)

    p = sub.add_parser("fixture", parents=[common], help="emit a named example graph or map ('list' names them)")
    p.add_argument("name")
    p.set_defaults(fn=cmd_fixture)

    p = sub.add_parser("sig", parents=[common], help="signature algebra")
    ssub = p.add_subparsers(dest="action", required=True)
    q = ssub.add_parser("of", parents=[common])
    q.add_argument("file")
    q = ssub.add_parser("glue", parents=[common])
    q.add_argument("a", help="map file or triple a,b,c")
    q.add_argument("b")
    q = ssub.add_parser("region", parents=[common])
    q.add_argument("target", nargs=3)
    q.add_argument("--margin", action="store_true")
    _region_opts(q)
    q = ssub.add_parser("synth-map", parents=[common])
    q.add_argument("target", nargs=3)
    q.add_argument("--no-build", action="store_true")
    q = ssub.add_parser("synth-graph", parents=[common])
    q.add_argument("target", nargs=3)
    q.add_argument("--eps", type=float)
    q.add_argument("--no-build", action="store_true")
    _region_opts(q)
    p.set_defaults(fn=cmd_sig)

    p = sub.add_parser("region", parents=[common], help="classify a signature against S")
    p.add_argument("target", nargs=3)
    p.add_argument("--margin", action="store_true")
    _region_opts(p)
    p.set_defaults(fn=cmd_region)

    p = sub.add_parser("experiment", parents=[common], help="evidence for the region S")
    esub = p.add_subparsers(dest="action", required=True)
    q = esub.add_parser("region-scan", parents=[common])
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--loops", action="store_true")
    q.add_argument("--dedup", action=argparse.BooleanOptionalAction, default=True)
    _region_opts(q)
    q = esub.add_parser("closure", parents=[common])
    q.add_argument("--trials", type=int, default=10_000)
    _region_opts(q)
    p.set_defaults(fn=cmd_experiment)

    p = sub.add_parser("chain", parents=[common], help="even/odd sweep chain")
    p.add_argument("action", nargs="?", choices=("calibrate",))
    p.add_argument("--d", type=int)
    p.add_argument("--layers", type=int)
    p.add_argument("--eps", type=float)
    p.add_argument("--const", type=float)
    p.set_defaults(fn=cmd_chain)
    return ap


def dispatch(argv: Optional[Sequence[str]] = None, config: Optional[RunConfig] = None,
             out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    for name in ("config", "threads", "seed", "out"):
        if not hasattr(args, name):
            setattr(args, name, None)
    if not hasattr(args, "csv"):
        args.csv = False
    try:
        cfg = config or load_config(args.config)
        cfg = cfg.override(threads=args.threads, seed=args.seed)
        return args.fn(args, cfg, out)
    except UsageError as e:
        err.write(f"eulercount: usage: {e}\n")
        return 2
    except (MapError, ValueError, ArithmeticError, OSError, json.JSONDecodeError, KeyError) as e:
        err.write(f"eulercount: error: {e}\n")
        return 1


def main(argv: Optional[Sequence[str]] = None) -> int:
    return dispatch(argv)


if __name__ == "__main__":
    sys.exit(main())
