"""Command-line front end: ``coarse-menger <command> [flags]``.

Exit codes: 0 success, 1 verification failure, 2 input error.
All randomness is derived from ``--seed`` through numpy's PCG64 generator.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from pathlib import Path as FsPath

import numpy as np

from coarse_menger.connector import build_connector, connector_fixture, connector_to_linkage, verify_connector
from coarse_menger.core.graph import Graph, dumps, graph_from_doc, graph_to_doc
from coarse_menger.errors import ContractError, InputError
from coarse_menger.fixtures.export import fixture_doc, to_dot
from coarse_menger.fixtures.planting import PlantedFixture, plant_terminals
from coarse_menger.fixtures.walls import gen_grid, gen_surface_walloid, gen_walloid
from coarse_menger.harvest import LinearDecomposition, harvest, harvest_invading
from coarse_menger.planar import random_planar
from coarse_menger.solve import (
    DEFAULT_BUDGET,
    EXACT_BOUND,
    PackCertificate,
    certificate_from_doc,
    duality_report,
    greedy_cover,
    greedy_packing,
    max_packing_exact,
    min_cover_exact,
    verify_cover,
    verify_pack,
)
from coarse_menger.treewrap import ExplicitFamily, GuardedTreeDecomposition, STPaths, pack_or_cover

SUMMARY_FIELDS = ["instance", "n", "m", "d", "k", "nu", "tau", "exact_pack", "exact_cover"]


class _Fail(Exception):
    """A certificate or structure failed verification."""


# -- argument parsing -------------------------------------------------------------------


def _ints(text: str, what: str, count: int | None = None) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError:
        raise InputError(f"{what}: expected comma-separated integers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise InputError(f"{what}: expected {count} integers, got {len(vals)}")
    return vals


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def _load_graph(args) -> tuple[Graph, frozenset[int], frozenset[int], dict]:
    doc = _read_json(args.graph)
    g, s, t = graph_from_doc(doc)
    if getattr(args, "S", None) is not None:
        s = g.check_vertices(_ints(args.S, "--S"), "S")
    if getattr(args, "T", None) is not None:
        t = g.check_vertices(_ints(args.T, "--T"), "T")
    return g, s, t, doc


def _random_spec(text: str) -> tuple[int, float, int]:
    parts = text.split(",")
    if len(parts) not in (2, 3):
        raise InputError("--random expects N,DENSITY[,COUNT]")
    try:
        n, dens = int(parts[0]), float(parts[1])
        count = int(parts[2]) if len(parts) == 3 else 1
    except ValueError:
        raise InputError(f"--random: cannot parse {text!r}") from None
    if count < 1:
        raise InputError("--random: COUNT must be positive")
    return n, dens, count


def instance_seeds(seed: int, count: int) -> list[int]:
    """Per-instance seeds drawn from a PCG64 stream keyed by ``seed``."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return [int(x) for x in rng.integers(0, 2**63 - 1, size=count)]


def _instances(args):
    """Yield ``(name, graph, S, T)`` for --graph or --random."""
    if args.graph is not None:
        g, s, t, _ = _load_graph(args)
        yield FsPath(args.graph).stem, g, s, t
        return
    if args.random is None:
        raise InputError("one of --graph or --random is required")
    n, dens, count = _random_spec(args.random)
    for i, sd in enumerate(instance_seeds(args.seed, count)):
        g = random_planar(sd, n, dens)
        rng = np.random.Generator(np.random.PCG64(sd ^ 0x5EED))
        size = max(1, n // 5)
        perm = rng.permutation(n)
        s = frozenset(int(v) for v in perm[:size])
        t = frozenset(int(v) for v in perm[-size:])
        if args.S is not None:
            s = g.check_vertices(_ints(args.S, "--S"), "S")
        if args.T is not None:
            t = g.check_vertices(_ints(args.T, "--T"), "T")
        yield f"random-{args.seed}-{i}", g, s, t


def _emit(text: str, out_dir: str | None, filename: str) -> None:
    if out_dir is None:
        sys.stdout.write(text)
        return
    target = FsPath(out_dir)
    target.mkdir(parents=True, exist_ok=True)
    tmp = target / (filename + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    tmp.replace(target / filename)


def _table(rows: list[dict], fields: list[str], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({f: r[f] for f in fields})
        return buf.getvalue()
    return dumps({"rows": [{f: r[f] for f in fields} for r in rows]})


# -- commands ---------------------------------------------------------------------------


def cmd_gen(args) -> int:
    chosen = [x for x in (args.grid, args.walloid, args.surface, args.random, args.connector) if x]
    if len(chosen) != 1:
        raise InputError("gen needs exactly one of --grid, --walloid, --surface, --random, --connector")
    fix = None
    s = t = frozenset()
    if args.grid:
        n, m = _ints(args.grid, "--grid", 2)
        g, name = gen_grid(n, m), f"grid_{n}_{m}"
    elif args.walloid:
        r, tt, a, b = _ints(args.walloid, "--walloid", 4)
        fix, name = gen_walloid(r, tt, a, b, args.arity), f"walloid_{r}_{tt}_{a}_{b}"
    elif args.surface:
        r, tt, h, c, a, b = _ints(args.surface, "--surface", 6)
        fix, name = gen_surface_walloid(r, tt, h, c, a, b, args.arity), f"surface_{r}_{tt}_{h}_{c}_{a}_{b}"
    elif args.random:
        n, dens, count = _random_spec(args.random)
        if count != 1:
            raise InputError("gen --random makes one graph; drop COUNT")
        g, name = random_planar(args.seed, n, dens), f"random_{n}_{args.seed}"
    else:
        d, k = _ints(args.connector, "--connector", 2)
        fix, name = connector_fixture(d, k), f"connector_{d}_{k}"
    if fix is not None and args.plant:
        spec = []
        for item in args.plant:
            try:
                color, site, count = item.split(":")
                spec.append((color, site, int(count)))
            except ValueError:
                raise InputError(f"--plant expects COLOR:SITE:COUNT, got {item!r}") from None
        fix = plant_terminals(fix, spec)
    if fix is not None:
        g = fix.graph
        if isinstance(fix, PlantedFixture):
            s, t = fix.s, fix.t
    if args.format == "dot":
        w = getattr(fix, "fixture", fix)
        _emit(to_dot(g, w, s, t, name=name), args.out, name + ".dot")
    elif args.format == "json":
        doc = fixture_doc(fix) if fix is not None else graph_to_doc(g)
        _emit(dumps(doc), args.out, name + ".json")
    else:
        raise InputError("gen supports --format json or dot")
    return 0


def _solve_rows(args, mode: str) -> int:
    ds = _ints(args.d, "--d")
    ks = _ints(args.k, "--k") if args.k is not None else [0]
    if any(x < 0 for x in ds + ks):
        raise InputError("--d and --k must be non-negative")
    rows = []
    failed = []
    for name, g, s, t in _instances(args):
        for d in ds:
            for k in ks:
                t0 = time.perf_counter()
                pack = cover = None
                exact_ok = g.n <= args.bound
                if mode == "duality":
                    rep = duality_report(g, s, t, d, k, budget=args.budget, bound=args.bound, seed=args.seed)
                    pack, cover = rep.pack, rep.cover
                if mode == "pack":
                    pack = (max_packing_exact(g, s, t, d, cap=k or None, budget=args.budget, bound=args.bound)
                            if exact_ok else greedy_packing(g, s, t, d))
                if mode == "cover":
                    cover = (min_cover_exact(g, s, t, d, budget=args.budget, bound=args.bound)
                             if exact_ok else greedy_cover(g, s, t, d, seed=args.seed))
                tag = f"{name}.d{d}.k{k}"
                for cert, check, kind in ((pack, verify_pack, "pack"), (cover, verify_cover, "cover")):
                    if cert is None:
                        continue
                    ok, msg = check(g, s, t, cert)
                    if not ok:
                        failed.append(f"{tag} {kind}: {msg}")
                    if args.out is not None:
                        _emit(dumps(cert.to_doc()), args.out, f"{tag}.{kind}.json")
                row = {
                    "instance": name, "n": g.n, "m": g.m, "d": d, "k": k,
                    "nu": "" if pack is None else pack.order,
                    "tau": "" if cover is None else cover.size,
                    "exact_pack": "" if pack is None else pack.exact,
                    "exact_cover": "" if cover is None else cover.exact,
                    "wall_s": round(time.perf_counter() - t0, 4),
                }
                rows.append(row)
    fields = SUMMARY_FIELDS + (["wall_s"] if args.timing else [])
    fmt = "csv" if args.format == "csv" else "json"
    _emit(_table(rows, fields, fmt), args.out, f"summary.{fmt}")
    for msg in failed:
        print(f"verification failed: {msg}", file=sys.stderr)
    return 1 if failed else 0


def cmd_pack(args) -> int:
    return _solve_rows(args, "pack")


def cmd_cover(args) -> int:
    return _solve_rows(args, "cover")


def cmd_duality(args) -> int:
    return _solve_rows(args, "duality")


def cmd_verify(args) -> int:
    g, s, t, _ = _load_graph(args)
    cert = certificate_from_doc(_read_json(args.cert))
    check = verify_pack if isinstance(cert, PackCertificate) else verify_cover
    ok, msg = check(g, s, t, cert)
    print("ok" if ok else f"rejected: {msg}")
    return 0 if ok else 1


def cmd_harvest(args) -> int:
    g, s, t, gdoc = _load_graph(args)
    ddoc = _read_json(args.decomp)
    decomp = LinearDecomposition.from_doc(ddoc)
    h = ddoc.get("H", sorted(decomp.vertices))
    f = ddoc.get("F", [])
    if args.F is not None:
        f = _ints(args.F, "--F")
    d, k = _single(args.d, "--d"), _single(args.k, "--k")
    out = harvest(g, h, decomp, s, t, f, d, k, inner_radius=args.inner_radius)
    doc = {"harvest": out.to_doc()}
    if "cover" in out.flags.values():
        inv = harvest_invading(g, h, decomp, s, t, f, d, k, out.hitting_core, inner_radius=args.inner_radius)
        doc["invading"] = inv.to_doc()
    _emit(dumps(doc), args.out, "harvest.json")
    return 0


def cmd_treepack(args) -> int:
    g, s, t, _ = _load_graph(args)
    gtd = GuardedTreeDecomposition.from_doc(_read_json(args.gtd))
    if args.family is not None:
        fam_doc = _read_json(args.family)
        try:
            family = ExplicitFamily(fam_doc["members"])
        except (KeyError, TypeError) as exc:
            raise InputError(f"family file needs a 'members' list: {exc}") from None
    else:
        family = STPaths(s, t)
    res = pack_or_cover(g, gtd, family, _single(args.d, "--d"), _single(args.k, "--k"))
    _emit(dumps(res.to_doc()), args.out, "treepack.json")
    return 0


def cmd_connector(args) -> int:
    d, k = _single(args.d, "--d"), _single(args.k, "--k")
    planted = connector_fixture(d, k)
    c = build_connector(planted, d, k)
    ok, why = verify_connector(planted.graph, c, planted.s, planted.t)
    if not ok:
        raise _Fail("; ".join(why))
    paths = connector_to_linkage(planted.graph, c)
    cert = PackCertificate(paths, d, exact=False)
    ok, msg = verify_pack(planted.graph, planted.s, planted.t, cert)
    if not ok:
        raise _Fail(msg)
    if args.out is not None:
        _emit(dumps(graph_to_doc(planted.graph, planted.s, planted.t)), args.out, "graph.json")
        _emit(dumps(c.to_doc()), args.out, "connector.json")
        _emit(dumps(cert.to_doc()), args.out, "pack.json")
    else:
        _emit(dumps({"connector": c.to_doc(), "pack": cert.to_doc(), "n": planted.graph.n}), None, "")
    return 0


def _single(text, flag: str) -> int:
    if text is None:
        raise InputError(f"{flag} is required")
    vals = _ints(text, flag, 1)
    return vals[0]


# -- parser -----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice (PCG64)")
    common.add_argument("--out", help="output directory (default: stdout)")
    common.add_argument("--format", choices=["json", "dot", "csv"], default="json")
    common.add_argument("--timing", action="store_true", help="add wall-clock seconds to summaries")

    graph = argparse.ArgumentParser(add_help=False)
    graph.add_argument("--graph", help="graph JSON file")
    graph.add_argument("--S", help="comma-separated S ids (overrides the file)")
    graph.add_argument("--T", help="comma-separated T ids (overrides the file)")
    graph.add_argument("--d", default="1", help="distance parameter (comma list allowed for sweeps)")
    graph.add_argument("--k", help="target packing size (comma list allowed for sweeps)")

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--random", help="N,DENSITY[,COUNT] seeded random planar instances")
    solver.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search-node budget")
    solver.add_argument("--bound", type=int, default=EXACT_BOUND, help="largest n for exact solvers")

    p = argparse.ArgumentParser(prog="coarse-menger", description="Scattered path packing and covering.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", parents=[common], help="generate a fixture graph")
    g.add_argument("--grid", help="N,M")
    g.add_argument("--walloid", help="r,t,a,b")
    g.add_argument("--surface", help="r,t,h,c,a,b")
    g.add_argument("--random", help="N,DENSITY")
    g.add_argument("--connector", help="d,k: planted fixture for the connector pipeline")
    g.add_argument("--arity", type=int, default=1, help="flap arity")
    g.add_argument("--plant", action="append", help="COLOR:SITE:COUNT, e.g. S:pocket(1):1")
    g.set_defaults(func=cmd_gen)

    for name, fn, text in (("pack", cmd_pack, "maximum d-scattered S-T packing"),
                           ("cover", cmd_cover, "minimum distance-d cover"),
                           ("duality", cmd_duality, "both sides with certificates")):
        q = sub.add_parser(name, parents=[common, graph, solver], help=text)
        q.set_defaults(func=fn)

    h = sub.add_parser("harvest", parents=[common, graph], help="harvest along a linear decomposition")
    h.add_argument("--decomp", required=True, help='JSON {"bags", "periphery", optional "H", "F"}')
    h.add_argument("--F", help="comma-separated forbidden vertices")
    h.add_argument("--inner-radius", type=int, default=None, help="window radius (default d//2)")
    h.set_defaults(func=cmd_harvest)

    tp = sub.add_parser("treepack", parents=[common, graph], help="pack-or-cover over a guarded tree decomposition")
    tp.add_argument("--gtd", required=True, help="guarded tree decomposition JSON")
    tp.add_argument("--family", help='explicit family JSON {"members": [[v, ...], ...]} (default: S-T paths)')
    tp.set_defaults(func=cmd_treepack)

    c = sub.add_parser("connector", parents=[common], help="build connector, extract and verify a linkage")
    c.add_argument("--d", default="1")
    c.add_argument("--k", default="2")
    c.set_defaults(func=cmd_connector)

    v = sub.add_parser("verify", parents=[common, graph], help="re-check a certificate against a graph")
    v.add_argument("--cert", required=True)
    v.set_defaults(func=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        if args.command == "verify" and args.graph is None:
            raise InputError("--graph is required")
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (_Fail, ContractError) as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
