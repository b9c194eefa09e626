"""Command-line entry point: ``leelab <command> ...`` or ``python -m leelab``.

Exit codes: 0 when a verdict was computed (existence and nonexistence
alike), 1 when a run is inconclusive or resource-limited, 2 for usage and
input errors.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .certificates import (CACHE_ENV, CertificateCache, cache_key, manifest,
                           verify_certificate)
from .geometry import Tile, lee_sphere, parse_tile_spec, shell, sphere_size
from .torus import TorusCode, TileProjectionError

EXIT_OK, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "to_json"):
        return obj.to_json()
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _emit(args, payload, human: str | None = None):
    if args.json or human is None:
        print(json.dumps(payload, sort_keys=True, indent=1, default=_jsonable))
    else:
        print(human)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}")


def _load_code(path: str) -> TorusCode:
    try:
        return TorusCode.from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: not a code JSON ({exc})")


def _tile(spec: str) -> Tile:
    try:
        if spec.startswith("file:"):
            return Tile.from_json(_load_json(spec[5:]))
        return parse_tile_spec(spec)
    except ValueError as exc:
        raise UsageError(str(exc))


def _cache(args) -> CertificateCache | None:
    d = args.cache_dir or os.environ.get(CACHE_ENV)
    return CertificateCache(d) if d else None


def _cached(args, claim: str, params: dict, compute, inputs: dict | None = None):
    """Return (certificate, from_cache)."""
    cache = _cache(args)
    key = cache_key(claim, params)
    if cache is not None:
        hit = cache.load(key)
        if hit is not None:
            return hit, True
    t0 = time.perf_counter()
    cert = compute()
    cert["manifest"] = manifest(args.argv, params, inputs, time.perf_counter() - t0)
    if cache is not None:
        cache.store(key, cert)
    return cert, False


def _verdict_exit(verdict: str) -> int:
    return EXIT_INCONCLUSIVE if verdict == "inconclusive" else EXIT_OK


# --------------------------------------------------------------------------
# commands


def cmd_sphere(args) -> int:
    if args.n < 1 or args.e < 0:
        raise UsageError("need --n >= 1 and --e >= 0")
    if args.size:
        _emit(args, {"n": args.n, "e": args.e, "size": sphere_size(args.n, args.e)},
              str(sphere_size(args.n, args.e)))
        return EXIT_OK
    pts = sorted(shell(args.n, args.e)) if args.shell else list(lee_sphere(args.n, args.e))
    _emit(args, {"n": args.n, "points": [list(p) for p in pts]},
          "\n".join(" ".join(map(str, p)) for p in pts))
    return EXIT_OK


def cmd_search(args) -> int:
    from .search import SearchOptions, certificate, search_tiling

    tile = _tile(args.tile)
    n = args.n or tile.n
    opts = SearchOptions(symmetry_reduction=not args.no_symmetry,
                         fix_origin_codeword=not args.no_fix_origin,
                         node_limit=args.node_limit, worker_count=args.workers,
                         max_solutions=None if args.all else 1)
    resume = _load_json(args.resume) if args.resume else None
    params = {"tile": tile.to_json(), "n": n, "q": args.q, "options": opts.to_json()}
    holder = {}

    def compute():
        res = search_tiling(tile, n, args.q, opts, resume=resume)
        holder["res"] = res
        cert = certificate(res, tile, args.q)
        cert["stats"] = res.stats.to_json()
        return cert

    cert, hit = (compute(), False) if resume else _cached(args, "search", params, compute)
    if resume:
        cert["manifest"] = manifest(args.argv, params)
    res = holder.get("res")
    if res is not None and res.checkpoint is not None and args.checkpoint:
        Path(args.checkpoint).write_text(json.dumps(res.checkpoint))
    if args.out:
        Path(args.out).write_text(json.dumps(cert["witness"] if args.witness_only else cert,
                                             sort_keys=True))
    human = f"{cert['verdict']} (nodes={cert['nodes']})"
    if cert["witness"] is not None:
        human += "\n" + json.dumps(cert["witness"])
    _emit(args, cert, human)
    return _verdict_exit(cert["verdict"])


def cmd_verify(args) -> int:
    from .torus import verify_perfect

    code = _load_code(args.code)
    tile = _tile(args.tile)
    try:
        rep = verify_perfect(code, tile, args.e)
    except TileProjectionError as exc:
        raise UsageError(str(exc))
    _emit(args, rep.to_json(), f"perfect={rep.covered_exactly_once}")
    return EXIT_OK


def cmd_certify(args) -> int:
    from .algebra import prove_no_linear

    params = {"n": args.n, "e": args.e, "node_limit": args.node_limit}
    cert, _ = _cached(args, "linear-nonexistence", params,
                      lambda: prove_no_linear(args.n, args.e, args.node_limit))
    _emit(args, cert, f"{cert['verdict']} over groups "
          + ", ".join(str(g["group"]) for g in cert["groups"]))
    return _verdict_exit(cert["verdict"])


def cmd_character(args) -> int:
    from .algebra import CharacterPoint, character_sum, theorem_d_witness_search

    tile = _tile(args.tile)
    if args.alpha:
        alpha = tuple(int(a) for a in args.alpha.split(","))
        if len(alpha) != tile.n:
            raise UsageError("--alpha must have one entry per coordinate")
        val, shadow = character_sum(tile, CharacterPoint(args.modulus, alpha))
        out = {"value": val.to_json(), "zero": val.is_zero(),
               "float_shadow": [shadow.real, shadow.imag]}
        _emit(args, out, f"zero={val.is_zero()} value~{shadow:.6g}")
        return EXIT_OK
    scan = theorem_d_witness_search(tile, [args.modulus])
    cert = {"claim": "common zero of Q_V(x^a) over gcd(a,|V|)=1",
            "method": "character-witness",
            "parameters": {"tile": tile.to_json(), "orders": [args.modulus]},
            "verdict": ("necessary-condition-satisfied" if scan.witness
                        else "no-witness-in-scan"),
            "witness": None if scan.witness is None else scan.witness.to_json(),
            "nodes": scan.points_scanned, "scan": scan.to_json()}
    cert["manifest"] = manifest(args.argv, cert["parameters"])
    _emit(args, cert, cert["verdict"] + ("" if not scan.witness else f" {scan.witness.alpha}"))
    return EXIT_OK


def cmd_prime_reduce(args) -> int:
    from .algebra import fourier_finiteness_prime, prime_tile_reduction

    tile = _tile(args.tile)
    params = {"tile": tile.to_json(), "node_limit": args.node_limit}

    def compute():
        r = prime_tile_reduction(tile, args.node_limit)
        return {"claim": "tiling of Z^n by a prime-size tile", "method": "prime-lattice-reduction",
                "parameters": params, "verdict": r["verdict"], "witness": r.get("weights"),
                "nodes": r.get("search", {}).get("nodes", 0), "details": r}

    cert, _ = _cached(args, "prime-reduce", params, compute)
    if args.fourier:
        cert = dict(cert, fourier=fourier_finiteness_prime(tile))
    _emit(args, cert, cert["verdict"])
    return EXIT_INCONCLUSIVE if cert["verdict"] == "inconclusive" else EXIT_OK


def _infer_radius(code: TorusCode) -> int:
    """The e with |C| |S(n,e)| = q^n, if there is one."""
    e = 0
    while len(code) * sphere_size(code.n, e) < code.cells:
        e += 1
    if len(code) * sphere_size(code.n, e) != code.cells:
        raise UsageError("code size does not match any sphere; pass --e")
    return e


def cmd_post(args) -> int:
    from .sectors import (census_g, post_combination, post_threshold,
                          verify_post_local)

    if args.post_cmd == "census":
        c = census_g(args.n, args.e)
        out = {"census": c.to_json(), "combination": post_combination(c)}
        _emit(args, out, json.dumps(out["combination"]))
    elif args.post_cmd == "threshold":
        if args.n < 6:
            raise UsageError("the threshold applies for n >= 6")
        e = post_threshold(args.n)
        _emit(args, {"n": args.n, "e_min": e}, str(e))
    else:
        code = _load_code(args.code)
        e = args.e if args.e is not None else _infer_radius(code)
        tile = lee_sphere(code.n, e)
        try:
            rep = verify_post_local(code, tile, sample=args.sample, seed=args.seed)
        except ValueError as exc:
            raise UsageError(str(exc))
        _emit(args, rep.to_json(), f"holds={rep.holds} sectors={rep.sectors_checked}")
    return EXIT_OK


def cmd_bounds(args) -> int:
    from .density import gw_region, gw_table

    if args.table:
        rows = gw_table(*args.table)
        if args.json:
            _emit(args, [r.to_json() for r in rows])
        else:
            buf = io.StringIO()
            w = csv.writer(buf)
            w.writerow(["n", "e", "status", "rules"])
            for r in rows:
                w.writerow([r.n, r.e, r.status, ";".join(f["status"] for f in r.fired)])
            print(buf.getvalue(), end="")
        return EXIT_OK
    if args.n is None or args.e is None:
        raise UsageError("give --n and --e, or --table NMAX EMAX")
    r = gw_region(args.n, args.e)
    _emit(args, r.to_json(), f"{r.status}")
    return EXIT_OK


def cmd_lp(args) -> int:
    from .density import build_witness, lp_inequality, lp_lhs, verify_lp_conditions

    try:
        if args.lp_cmd == "verify":
            rep = verify_lp_conditions(args.n, args.e, flat=not args.no_flat)
            out = rep.to_json()
            out["witness"] = build_witness(args.n, args.e).to_json()
            _emit(args, out, f"conditions_1_2={rep.vanishes_on_sphere and rep.convolution_nonneg_outside}"
                             f" sum={rep.total_sum} proves_nonexistence={rep.proves_nonexistence}")
        else:
            ok = lp_inequality(args.n, args.e)
            lhs = lp_lhs(args.n, args.e)
            _emit(args, {"n": args.n, "e": args.e, "lhs": str(lhs), "lhs_float": float(lhs),
                         "holds": ok}, f"{ok} (lhs={float(lhs):.6f})")
    except ValueError as exc:
        raise UsageError(str(exc))
    return EXIT_OK


def cmd_lep(args) -> int:
    from .density import lambda_shell, lambda_size, lep_bounds

    size = lambda_size(args.n, args.e, args.s)
    out: dict = {"n": args.n, "e": args.e, "s": args.s, "size": size}
    if args.points:
        out["points"] = sorted(list(p) for p in lambda_shell(args.n, args.e, args.s).points)
    if args.code_size:
        b = lep_bounds(args.n, args.e, args.s, args.code_size)
        out.update(distance_bound=str(b["distance_bound"]),
                   averaging_bound=None if b["averaging_bound"] is None else str(b["averaging_bound"]))
    _emit(args, out, f"|Λ| = {size}")
    return EXIT_OK


def cmd_semicross(args) -> int:
    from .semicross import counting_lemma_check, cyclic_check, enumerate_semicross_tilings, u_sets

    if args.sc_cmd == "enumerate":
        resume = _load_json(args.resume) if args.resume else None
        r = enumerate_semicross_tilings(args.p, node_limit=args.node_limit, resume=resume,
                                        workers=args.workers)
        out = r.to_json()
        out["codes"] = [c.to_json() for c in r.codes] if args.codes else None
        _emit(args, out, f"{len(r.codes)} tilings through 0, {r.total_tilings} in total, "
                         f"all lattice: {r.all_lattice}")
        return EXIT_OK if r.complete else EXIT_INCONCLUSIVE
    code = _load_code(args.code)
    if args.lemma == "counting":
        res = {k: counting_lemma_check(code, k) for k in range(1, code.q)}
        out = {"lemma": "counting", "by_k": res, "holds": all(res.values())}
    elif args.lemma == "usets":
        w = tuple(code.codewords[0]) if not args.w else tuple(int(x) for x in args.w.split(","))
        u = u_sets(code, w)
        out = {"lemma": "usets", **u.to_json(), "holds": u.holds}
    else:
        out = {"lemma": "cyclic", "holds": cyclic_check(code)}
    _emit(args, out, f"holds={out['holds']}")
    return EXIT_OK


def cmd_periods(args) -> int:
    from .torus import detect_periods

    code = _load_code(args.code)
    pg = detect_periods(code)
    out = {"size": len(pg), "generators": [list(g) for g in pg.generators],
           "lattice_basis": pg.lattice_basis(), "is_lattice": len(pg) == len(code)}
    _emit(args, out, f"{len(pg)} periods, lattice={out['is_lattice']}")
    return EXIT_OK


def cmd_blowout(args) -> int:
    from .torus import PreconditionError, blowout_check

    code = _load_code(args.code)
    tile = _tile(args.tile)
    try:
        ok = blowout_check(code, tile, args.a)
    except (PreconditionError, TileProjectionError) as exc:
        raise UsageError(str(exc))
    _emit(args, {"a": args.a, "tiles": ok}, str(ok))
    return EXIT_OK


def cmd_verify_certificate(args) -> int:
    cert = _load_json(args.file)
    if not isinstance(cert, dict):
        raise UsageError(f"{args.file}: certificate must be a JSON object")
    try:
        res = verify_certificate(cert)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{args.file}: incomplete certificate ({exc})")
    _emit(args, res, f"ok={res['ok']}")
    return EXIT_OK if res["ok"] else EXIT_INCONCLUSIVE


# --------------------------------------------------------------------------
# parser


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                   help="machine-readable JSON output")
    g.add_argument("--workers", type=int, default=argparse.SUPPRESS, help="worker processes")
    g.add_argument("--node-limit", type=int, default=argparse.SUPPRESS,
                   help="search node budget; exceeding it gives an inconclusive verdict")
    g.add_argument("--resume", default=argparse.SUPPRESS, help="checkpoint file to resume from")
    g.add_argument("--cache-dir", default=argparse.SUPPRESS,
                   help=f"certificate cache directory (default ${CACHE_ENV})")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="leelab", parents=[common],
                                     description="Perfect Lee codes and lattice tilings.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("sphere", cmd_sphere, "Lee sphere points or size")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--e", type=int, required=True)
    sp.add_argument("--size", action="store_true")
    sp.add_argument("--shell", action="store_true", help="points at distance exactly e")

    sp = add("search", cmd_search, "search for a tiling of Z_q^n")
    sp.add_argument("--tile", required=True, help="sphere:n,e | semicross:k | doublesphere:n,e | file:path")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int)
    sp.add_argument("--no-symmetry", action="store_true")
    sp.add_argument("--no-fix-origin", action="store_true")
    sp.add_argument("--all", action="store_true", help="enumerate every tiling")
    sp.add_argument("--out", help="write the certificate here")
    sp.add_argument("--witness-only", action="store_true", help="with --out, write only the code")
    sp.add_argument("--checkpoint", help="where to write the checkpoint if the budget runs out")

    sp = add("verify", cmd_verify, "check that a code tiles the torus")
    sp.add_argument("--code", required=True)
    sp.add_argument("--tile", required=True)
    sp.add_argument("--e", type=int)

    sp = add("certify", cmd_certify, "nonexistence certificates")
    sp.add_argument("kind", choices=["linear-nonexistence"])
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--e", type=int, required=True)

    sp = add("character", cmd_character, "character sums of Q_V")
    sp.add_argument("--tile", required=True)
    sp.add_argument("--modulus", type=int, required=True)
    sp.add_argument("--alpha", help="comma-separated exponents; omit to scan for a witness")

    sp = add("prime-reduce", cmd_prime_reduce, "prime-size tile reduction to Z_p")
    sp.add_argument("--tile", required=True)
    sp.add_argument("--fourier", action="store_true", help="also count order-p common zeros")

    sp = add("post", cmd_post, "sector census, local inequality, threshold")
    psub = sp.add_subparsers(dest="post_cmd", required=True)
    c = psub.add_parser("census", parents=[common])
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--e", type=int, required=True)
    c = psub.add_parser("verify", parents=[common])
    c.add_argument("--code", required=True)
    c.add_argument("--e", type=int, help="sphere radius (inferred from |C| when omitted)")
    c.add_argument("--sample", type=int)
    c.add_argument("--seed", type=int, default=0)
    c = psub.add_parser("threshold", parents=[common])
    c.add_argument("--n", type=int, required=True)

    sp = add("bounds", cmd_bounds, "region of known (non)existence")
    bsub = sp.add_subparsers(dest="bounds_cmd", required=True)
    c = bsub.add_parser("region", parents=[common])
    c.add_argument("--n", type=int)
    c.add_argument("--e", type=int)
    c.add_argument("--table", type=int, nargs=2, metavar=("NMAX", "EMAX"))

    sp = add("lp", cmd_lp, "linear-programming witness")
    lsub = sp.add_subparsers(dest="lp_cmd", required=True)
    for name in ("verify", "inequality"):
        c = lsub.add_parser(name, parents=[common])
        c.add_argument("--n", type=int, required=True)
        c.add_argument("--e", type=int, required=True)
        if name == "verify":
            c.add_argument("--no-flat", action="store_true", help="skip the brute-force route")

    sp = add("lep", cmd_lep, "Lepistö shells and bounds")
    lsub = sp.add_subparsers(dest="lep_cmd", required=True)
    c = lsub.add_parser("shell", parents=[common])
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--e", type=int, required=True)
    c.add_argument("--s", type=int, required=True)
    c.add_argument("--points", action="store_true")
    c.add_argument("--code-size", type=int)

    sp = add("semicross", cmd_semicross, "semi-cross tilings")
    ssub = sp.add_subparsers(dest="sc_cmd", required=True)
    c = ssub.add_parser("enumerate", parents=[common])
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--codes", action="store_true", help="include every tiling in the output")
    c = ssub.add_parser("check", parents=[common])
    c.add_argument("--code", required=True)
    c.add_argument("--lemma", choices=["counting", "usets", "cyclic"], required=True)
    c.add_argument("--w", help="reference codeword for usets")

    sp = add("periods", cmd_periods, "period group of a code")
    sp.add_argument("--code", required=True)

    sp = add("blowout", cmd_blowout, "check the blown-up tile aV")
    sp.add_argument("--code", required=True)
    sp.add_argument("--tile", required=True)
    sp.add_argument("--a", type=int, required=True)

    sp = add("verify-certificate", cmd_verify_certificate, "replay a certificate's cheap checks")
    sp.add_argument("file")
    return parser


_DEFAULTS = {"json": False, "workers": 1, "node_limit": None, "resume": None, "cache_dir": None}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    for k, v in _DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    args.argv = ["leelab"] + argv
    if args.workers < 1:
        print("error: --workers must be positive", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (TileProjectionError, MemoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE if isinstance(exc, TileProjectionError) else EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
