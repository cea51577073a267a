"""Command line driver.

Every subcommand prints a report (JSON by default) containing the command
echo, a digest of the inputs, the results and named pass/fail checks.
Exit codes: 0 all checks passed, 1 a verification failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .cone import (
    Chamber,
    ConeFrame,
    DegenerateChamber,
    OutsidePositiveCone,
    chamber_contains,
    cone_rays,
    in_pos,
    in_pos_plus,
)
from .diagrams import coxeter_diagram
from .documents import chamber_doc, digest, dumps, load_isometry, load_lattice, load_vector
from .kummer import (
    blowup_config,
    double_kummer_config,
    enriques_quotient_config,
    find_affine_fibers,
    theta_on_config,
)
from .lattice import (
    Involution,
    LatticeError,
    enumerate_roots,
    make_standard,
    smith_invariants,
    swap_involution,
)
from .orbits import classify_mod_W, classify_roots_mod_W, primitive_isotropic
from .vinberg import DEFAULT_BUDGET, finite_volume_check, vinberg_roots
from .weyl import (
    DEFAULT_MAX_STEPS,
    EnriquesSetup,
    FactorizationError,
    ReductionBudgetExceeded,
    _default_seed,
    chamber_reduce,
    factorize,
    verify_fundamental_domain,
)
from .witness import escape_chain, escape_witness, monomial, span_member

__all__ = ["main", "run", "build_parser", "verify_cone_suite"]


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- input helpers


def _read_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _lattice(source: str):
    if source.endswith(".json") or Path(source).is_file():
        return load_lattice(_read_json(source))
    return make_standard(source)


def _default_controller(lattice) -> tuple[int, ...]:
    n = lattice.rank
    for i in range(n):
        e = tuple(int(i == j) for j in range(n))
        if lattice.norm(e) >= 0:
            return e
    return _default_seed(lattice, [])


def _vinberg_chamber(lattice, controller, budget):
    run = vinberg_roots(lattice, controller or _default_controller(lattice), budget)
    return run, run.chamber()


def _chamber(args, lattice) -> Chamber:
    if getattr(args, "walls", None):
        doc = _read_json(args.walls)
        if isinstance(doc, dict) and "frame" in doc:
            from .documents import load_chamber

            return load_chamber(doc)
        walls = [load_vector(v) for v in (doc["walls"] if isinstance(doc, dict) else doc)]
        seed = load_vector(args.frame_seed) if args.frame_seed else _default_seed(lattice, walls)
        return Chamber.from_walls(ConeFrame(lattice, seed), walls)
    controller = load_vector(args.controller) if getattr(args, "controller", None) else None
    return _vinberg_chamber(lattice, controller, args.budget)[1]


# ---------------------------------------------------------------- subcommands


def cmd_lattice(args):
    lat = _lattice(args.lattice)
    divisors, disc = smith_invariants(lat)
    res = {
        "rank": lat.rank,
        "gram": [list(r) for r in lat.gram],
        "determinant": lat.determinant,
        "signature": list(lat.signature),
        "even": lat.is_even(),
        "smith_divisors": list(divisors),
        "discriminant": disc,
    }
    return res, {}


def cmd_roots(args):
    lat = _lattice(args.lattice)
    roots = enumerate_roots(lat, args.bound)
    return {"bound": args.bound, "count": len(roots), "roots": [list(r) for r in roots]}, {
        "all_norm_minus_two": all(lat.norm(r) == -2 for r in roots)
    }


def _run_report(lat, run):
    diagram = coxeter_diagram(lat, run.accepted)
    fv = finite_volume_check(run) if run.accepted else False
    res = run.as_dict()
    res["count"] = len(run.accepted)
    res["diagram"] = diagram.as_dict()
    res["finite_volume"] = fv
    if fv:
        rays = cone_rays(run.chamber())
        res["extreme_ray_norms"] = [lat.norm(r) for r in rays.rays]
    return res, fv


def cmd_vinberg(args):
    lat = _lattice(args.lattice)
    controller = load_vector(args.controller) if args.controller else _default_controller(lat)
    run = vinberg_roots(lat, controller, args.budget)
    res, fv = _run_report(lat, run)
    return res, {"finite_volume": fv}


def cmd_cone(args):
    lat = _lattice(args.lattice)
    c = _chamber(args, lat)
    res: dict = {"chamber": chamber_doc(c)}
    checks = {}
    if args.action == "rays":
        rays = cone_rays(c)
        res["pointed"] = rays.pointed
        res["rays"] = [list(r) for r in rays.rays]
        res["lineality"] = [list(r) for r in rays.lineality]
        res["ray_norms"] = [lat.norm(r) for r in rays.rays]
        checks["rays_in_closed_positive_cone"] = rays.pointed and all(n >= 0 for n in res["ray_norms"])
    else:
        if not args.vector:
            raise UsageError("cone check needs --vector")
        x = load_vector(args.vector)
        res["vector"] = list(x)
        res["in_pos"] = in_pos(c.frame, x)
        res["in_pos_plus"] = in_pos_plus(c.frame, x)
        if res["in_pos_plus"]:
            res["contains"] = chamber_contains(c, x)
            res["contains_strict"] = chamber_contains(c, x, strict=True)
            checks["contains"] = res["contains"]
        else:
            res["contains"] = None
            checks["in_pos_plus"] = False
    return res, checks


def cmd_weyl(args):
    lat = _lattice(args.lattice)
    c = _chamber(args, lat)
    if args.action == "reduce":
        if not args.vector:
            raise UsageError("weyl reduce needs --vector")
        x = load_vector(args.vector)
        try:
            red = chamber_reduce(c, x, args.strategy, args.max_steps)
        except ReductionBudgetExceeded as exc:
            return {"vector": list(x), "partial_word": list(exc.word), "error": str(exc)}, {"reduced": False}
        return {"vector": list(x), "word": list(red.word), "reduced": list(red.vector)}, {
            "in_chamber": chamber_contains(c, red.vector)
        }
    if args.action == "verify":
        gens = None
        if args.drop_wall is not None:
            gens = c.walls
            c = c.without(args.drop_wall)
        rep = verify_fundamental_domain(c, args.samples, args.radius, args.seed, generators=gens)
        return rep.as_dict(), {"coverage": rep.coverage_ok, "disjointness": rep.disjointness_ok}
    # factor
    if not args.matrix:
        raise UsageError("weyl factor needs --matrix")
    g = load_isometry(_read_json(args.matrix))
    try:
        word, a = factorize(c, g, args.max_steps)
    except FactorizationError as exc:
        return {"error": str(exc)}, {"factorized": False}
    return {"word": list(word), "stabilizer": [list(r) for r in a.matrix]}, {"factorized": True}


def cmd_orbits(args):
    lat = _lattice(args.lattice)
    c = _chamber(args, lat)
    if args.action == "isotropic":
        rays = [r.generator for r in primitive_isotropic(c.frame, args.bound)]
        table = classify_mod_W(c, rays, merge_symmetries=args.merge_symmetries)
        res = {"bound": args.bound, "inputs": len(rays), **table.as_dict()}
    else:
        roots = enumerate_roots(lat, args.bound)
        table = classify_roots_mod_W(c, roots, merge_symmetries=args.merge_symmetries)
        res = {"bound": args.bound, "inputs": len(roots), **table.as_dict()}
    return res, {"all_classified": not table.failures}


def cmd_kummer(args):
    if args.action == "config":
        cfg = double_kummer_config()
        from . import _arith as ar

        theta = theta_on_config()
        res = {
            **cfg.as_dict(),
            "count": len(cfg),
            "gram_rank": ar.rank(cfg.gram()),
            "theta": {k: theta(k) for k in cfg.names},
        }
        return res, {"theta_preserves_pairings": theta.preserves(cfg)}
    q = enriques_quotient_config()
    if args.action == "quotient":
        from . import _arith as ar

        return {**q.as_dict(), "count": len(q), "gram_rank": ar.rank(q.gram()), "determinant": ar.det(q.gram())}, {}
    if args.action == "fibers":
        cfg = double_kummer_config() if args.k3 else q
        fibers = find_affine_fibers(cfg)
        return {"fibers": [f.as_dict() for f in fibers], "count": len(fibers)}, {
            "fibers_isotropic": all(f.check(cfg) for f in fibers)
        }
    through = [t for t in (args.through or "").split(",") if t]
    b = blowup_config(q, args.center, args.then, through)
    return b.as_dict(), {}


def cmd_witness(args):
    p = args.p
    if args.gens:
        ns = [int(v) for v in args.gens.split(",") if v.strip()]
        gens = [monomial(p, -2 * n) for n in ns]
        w = escape_witness(gens)
        return {"p": p, "generators": [g.as_dict() for g in gens], "witness": w.as_dict(), "witness_text": str(w)}, {
            "escapes_span": not span_member(gens, w)
        }
    chain = escape_chain(p, args.n_max)
    ok = all(not span_member(chain[:k], chain[k]) for k in range(1, len(chain)))
    return {"p": p, "n_max": args.n_max, "chain": [str(f) for f in chain]}, {"chain_strictly_increasing": ok}


# ---------------------------------------------------------------- verify-cone suite


def _involution(doc, lattice):
    if doc in (None, "identity", "trivial"):
        return None, lattice
    if doc == "swap":
        big, sw = swap_involution(lattice)
        return sw, big
    return Involution(load_isometry(doc).matrix), lattice


def verify_cone_suite(config: dict) -> tuple[dict, dict, list[str]]:
    """Run the combined checks described by ``config``; returns (results, checks, warnings)."""
    warnings: list[str] = []
    lattice = load_lattice(config.get("lattice", "E10"))
    theta, ambient = _involution(config.get("involution"), lattice)
    samples = int(config.get("samples", 100))
    radius = int(config.get("word_radius", 3))
    seed = int(config.get("seed", 0))
    nodal_doc = config.get("nodal", "vinberg")
    if nodal_doc == "vinberg":
        controller = load_vector(config["controller"]) if "controller" in config else _default_controller(lattice)
        run = vinberg_roots(lattice, controller, int(config.get("budget", DEFAULT_BUDGET)))
        nodal = list(run.accepted)
    else:
        nodal = [load_vector(v) for v in nodal_doc]
    drop = sorted({int(i) for i in config.get("drop_walls", [])})
    results: dict = {"lattice": {"rank": lattice.rank, "signature": list(lattice.signature)}}
    checks: dict = {}
    if theta is not None:
        lift = config.get("lift", "first")
        amb_nodal = [tuple(b) + (0,) * lattice.rank for b in nodal] if lift == "first" else nodal
        setup = EnriquesSetup.build(ambient, theta, amb_nodal)
        full = setup.chamber
        results["fixed_lattice"] = {"rank": setup.fixed.rank, "gram": [list(r) for r in setup.fixed.gram]}
    else:
        frame_seed = load_vector(config["frame_seed"]) if "frame_seed" in config else None
        if not nodal:
            warnings.append("empty nodal set: the group is trivial and the chamber is the whole cone")
            seed_vec = frame_seed or _default_seed(lattice, [])
            c = Chamber(ConeFrame(lattice, seed_vec), (), seed_vec)
            rep = verify_fundamental_domain(c, samples, 0, seed)
            results["fundamental_domain"] = rep.as_dict()
            checks["coverage"] = rep.coverage_ok
            checks["disjointness"] = rep.disjointness_ok
            results["skipped"] = ["finite_volume", "orbit_stability"]
            return results, checks, warnings
        seed_vec = frame_seed or _default_seed(lattice, nodal)
        full = Chamber.from_walls(ConeFrame(lattice, seed_vec), nodal)
    gens = full.walls
    chamber = full
    for i in reversed(drop):
        chamber = chamber.without(i)
    results["walls"] = [list(b) for b in chamber.walls]
    rep = verify_fundamental_domain(chamber, samples, radius, seed, generators=gens)
    results["fundamental_domain"] = rep.as_dict()
    checks["coverage"] = rep.coverage_ok
    checks["disjointness"] = rep.disjointness_ok
    rays = cone_rays(chamber)
    fv = rays.pointed and all(chamber.lattice.norm(r) >= 0 for r in rays.rays)
    results["finite_volume"] = fv
    checks["finite_volume"] = fv
    bounds = [int(b) for b in config.get("orbit_bounds", [1, 2])]
    if fv and bounds:
        reps = []
        for b in bounds:
            iso = [r.generator for r in primitive_isotropic(chamber.frame, b)]
            reps.append(classify_mod_W(chamber, iso).representatives)
        results["orbit_representatives"] = {str(b): [list(r) for r in rs] for b, rs in zip(bounds, reps)}
        checks["orbit_stability"] = all(rs == reps[0] for rs in reps)
    if "pi_rays" in config:
        pis = [load_vector(v) for v in config["pi_rays"]]
        inside = []
        for v in pis:
            try:
                inside.append(chamber_contains(chamber, v))
            except OutsidePositiveCone:
                inside.append(False)
        results["pi_containment"] = inside
        checks["pi_in_chamber"] = all(inside)
    return results, checks, warnings


def cmd_verify_cone(args):
    config = _read_json(args.config)
    if not isinstance(config, dict):
        raise UsageError("config must be a JSON object")
    results, checks, warnings = verify_cone_suite(config)
    if warnings:
        results["warnings"] = warnings
    return results, checks


# ---------------------------------------------------------------- parser and driver


def _common(p: argparse.ArgumentParser, lattice_default: str | None = "E10") -> None:
    p.add_argument("--lattice", default=lattice_default, help="standard name (U, E8minus, E10, diag:2,-2, U+U) or JSON file")
    p.add_argument("--seed", type=int, default=0, help="seed for sampling")
    p.add_argument("--bound", type=int, default=1, help="coordinate bound for enumeration")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="Vinberg candidate budget")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in the report")


def _chamber_opts(p: argparse.ArgumentParser) -> None:
    p.add_argument("--walls", help="JSON file with a wall list or a chamber document (default: Vinberg walls)")
    p.add_argument("--frame-seed", help="positive vector selecting the cone component, e.g. 1,1")
    p.add_argument("--controller", help="Vinberg controller when walls are not given")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="enriques-cone", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice", help="Gram data and invariants of a lattice")
    _common(p)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("roots", help="enumerate (-2)-vectors in a coordinate box")
    _common(p)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("vinberg", help="Vinberg wall enumeration")
    vs = p.add_subparsers(dest="action", required=True)
    q = vs.add_parser("run")
    _common(q)
    q.add_argument("--controller", help="controller vector, e.g. 1,0,0,0,0,0,0,0,0,0")
    q.set_defaults(func=cmd_vinberg)

    p = sub.add_parser("cone", help="positive cone and chamber queries")
    cs = p.add_subparsers(dest="action", required=True)
    for name in ("check", "rays"):
        q = cs.add_parser(name)
        _common(q)
        _chamber_opts(q)
        q.add_argument("--vector", help="vector to test, comma separated")
        q.set_defaults(func=cmd_cone)

    p = sub.add_parser("weyl", help="chamber reduction, domain verification, factorisation")
    ws = p.add_subparsers(dest="action", required=True)
    for name in ("reduce", "verify", "factor"):
        q = ws.add_parser(name)
        _common(q)
        _chamber_opts(q)
        q.add_argument("--vector")
        q.add_argument("--strategy", choices=("walk", "greedy"), default="walk")
        q.add_argument("--max-steps", type=int, default=DEFAULT_MAX_STEPS)
        q.add_argument("--samples", type=int, default=100)
        q.add_argument("--radius", type=int, default=3)
        q.add_argument("--drop-wall", type=int, help="verify the chamber with this wall removed")
        q.add_argument("--matrix", help="JSON file with an isometry document")
        q.set_defaults(func=cmd_weyl)

    p = sub.add_parser("orbits", help="orbit representatives modulo the reflection group")
    os_ = p.add_subparsers(dest="action", required=True)
    for name in ("isotropic", "nodal"):
        q = os_.add_parser(name)
        _common(q)
        _chamber_opts(q)
        q.add_argument("--merge-symmetries", action="store_true")
        q.set_defaults(func=cmd_orbits)

    p = sub.add_parser("kummer", help="double Kummer configuration and its quotient")
    ks = p.add_subparsers(dest="action", required=True)
    for name in ("config", "quotient", "fibers", "blowup"):
        q = ks.add_parser(name)
        _common(q, None)
        if name == "fibers":
            q.add_argument("--k3", action="store_true", help="search the 24-curve configuration instead")
        if name == "blowup":
            q.add_argument("--center", default="H_2")
            q.add_argument("--then", type=int, default=3)
            q.add_argument("--through", default="D_23", help="comma separated curves through the centre")
        q.set_defaults(func=cmd_kummer)

    p = sub.add_parser("witness", help="escaping elements for spans of t^(-2n) a over F_p")
    ts = p.add_subparsers(dest="action", required=True)
    q = ts.add_parser("escape")
    _common(q, None)
    q.add_argument("--p", type=int, default=5)
    q.add_argument("--n-max", type=int, default=50)
    q.add_argument("--gens", help="indices n of the generators t^(-2n), e.g. 0,1,2")
    q.set_defaults(func=cmd_witness)

    p = sub.add_parser("verify-cone", help="combined verification driven by a JSON config")
    _common(p, None)
    p.add_argument("--config", required=True)
    p.set_defaults(func=cmd_verify_cone)
    return parser


def _text(obj, prefix="") -> list[str]:
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and len(json.dumps(v)) > 100:
                lines.append(f"{prefix}{k}:")
                lines.extend(_text(v, prefix + "  "))
            else:
                lines.append(f"{prefix}{k}: {json.dumps(v, ensure_ascii=False)}")
    elif isinstance(obj, list):
        for v in obj:
            lines.append(f"{prefix}- {json.dumps(v, ensure_ascii=False)}")
    else:
        lines.append(f"{prefix}{obj}")
    return lines


def _inputs_digest(argv: Sequence[str], args) -> str:
    files = {}
    for name in ("config", "walls", "matrix"):
        path = getattr(args, name, None)
        if path and Path(path).is_file():
            files[name] = Path(path).read_text(encoding="utf-8")
    lat = getattr(args, "lattice", None)
    if lat and Path(lat).is_file():
        files["lattice"] = Path(lat).read_text(encoding="utf-8")
    return digest({"argv": list(argv), "files": files})


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        results, checks = args.func(args)
    except (UsageError, LatticeError, DegenerateChamber, OutsidePositiveCone, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    passed = all(checks.values())
    report = {
        "command": argv,
        "inputs_digest": _inputs_digest(argv, args),
        "passed": passed,
        "checks": checks,
        "results": results,
    }
    if args.timing:
        report["wall_clock_seconds"] = round(time.perf_counter() - start, 3)
    text = dumps(report) if args.format == "json" else "\n".join(_text(report)) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        stdout.write(text)
    return 0 if passed else 1


def main() -> None:
    sys.exit(run())
