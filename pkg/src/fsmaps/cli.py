"""Command line: fsmaps {curve, tr, extract, oracle, verify, report}."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import census
from .config import RunConfig
from .counts import CountTable, profile_key
from .curve import build_exchanged, build_ordinary, solve_disc_data
from .errors import ConfigError, DegenerateRamification, FsmapsError, ParameterCollision
from .extract import extract_fsmap_counts, extract_map_counts
from .tr import TREngine
from .verify import run_verification, topologies

log = logging.getLogger("fsmaps")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DEGENERATE = 0, 1, 2, 3
MAX_T = 8


# ---- parsing -----------------------------------------------------------------------


def _ks(text):
    try:
        ks = tuple(int(x) for x in text.replace(",", " ").split())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad boundary degrees {text!r}") from exc
    if not ks or any(k < 0 for k in ks):
        raise argparse.ArgumentTypeError(f"bad boundary degrees {text!r}")
    return ks


def _face(text):
    try:
        j, f = text.split(":")
        return int(j), int(f)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"faces are given as degree:count, got {text!r}") from exc


def _kind(text):
    return text.replace("-", "_")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration; flags override it")
    for j in range(3, MAX_T + 1):
        common.add_argument(f"--t{j}", metavar="P/Q", help=f"coupling of degree-{j} faces")
    common.add_argument("--order", type=int, help="truncation order D in beta")
    common.add_argument("--chi", type=int, help="largest 2g-2+n computed")
    common.add_argument("--degree-cap", type=int, dest="degree_cap", help="largest boundary degree K")
    common.add_argument("--edge-cap", type=int, dest="edge_cap", help="census cap on oriented edges")
    common.add_argument("--out", dest="out_dir", help="directory for JSON / CSV output")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="fsmaps", description="Ordinary and fully simple maps from topological recursion.")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("curve", parents=[common], help="solve the disc data and dump both spectral curves")

    tr = sub.add_parser("tr", parents=[common], help="run the recursion and dump multidifferentials")
    tr.add_argument("--side", type=_kind, choices=["ordinary", "fully_simple"], default="ordinary")
    tr.add_argument("--g", type=int)
    tr.add_argument("--n", type=int)

    ex = sub.add_parser("extract", parents=[common], help="graded map counts read off TR")
    ex.add_argument("--side", type=_kind, choices=["ordinary", "fully_simple"], default="ordinary")
    ex.add_argument("--g", type=int, default=0)
    ex.add_argument("--k", type=_ks, required=True, help="boundary degrees, e.g. 2 or 2,3")
    ex.add_argument("--layer", choices=["all", "t0"], default="all", help="t0 keeps maps without internal faces")

    orc = sub.add_parser("oracle", parents=[common], help="brute-force census counts")
    orc.add_argument("--kind", type=_kind, choices=["ordinary", "fully_simple", "closed"], default="ordinary")
    orc.add_argument("--g", type=int, default=0)
    orc.add_argument("--k", type=_ks, default=())
    orc.add_argument("--faces", type=_face, nargs="*", default=None, help="profile, e.g. 4:2 3:1")

    sub.add_parser("verify", parents=[common], help="run the identity suite; exit 1 on any failure")
    sub.add_parser("report", parents=[common], help="human-readable summary of curves, tables and checks")
    return p


def resolve_config(args) -> RunConfig:
    data = {}
    if args.config:
        data = RunConfig.load(args.config).to_json()
        data["couplings"] = {k.lstrip("t"): v for k, v in data["couplings"].items()}
    cp = dict(data.get("couplings", {}))
    for j in range(3, MAX_T + 1):
        v = getattr(args, f"t{j}", None)
        if v is not None:
            cp[str(j)] = v
    data["couplings"] = cp
    for name in ("order", "chi", "degree_cap", "edge_cap", "out_dir"):
        v = getattr(args, name, None)
        if v is not None:
            data[name] = v
    return RunConfig.from_json(data)


# ---- output ------------------------------------------------------------------------


def _dump(cfg, name, payload):
    if not cfg.out_dir:
        return None
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, name)
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def _write_text(cfg, name, text):
    if not cfg.out_dir:
        return None
    os.makedirs(cfg.out_dir, exist_ok=True)
    path = os.path.join(cfg.out_dir, name)
    with open(path, "w") as fh:
        fh.write(text)
    return path


def _leading(s, n=3):
    items = s.items()
    text = " + ".join(f"{c}*b^{e}" for e, c in items[:n]) or "0"
    return text + " + ..." if len(items) > n else text


# ---- commands ----------------------------------------------------------------------


def cmd_curve(cfg: RunConfig):
    V = cfg.potential
    disc = solve_disc_data(V, cfg.order)
    o = build_ordinary(V, disc)
    print(f"a  = {_leading(disc.a, 4)} + O(b^{disc.a.prec})")
    print(f"c^2 = {_leading(disc.S, 4)} + O(b^{disc.S.prec})")
    payload = {"config": cfg.to_json(), "ordinary": o.to_json()}
    try:
        x = build_exchanged(V, disc)
        payload["exchanged"] = x.to_json()
        print(f"exchanged curve: ramification polynomial of degree {x.ram_poly.degree}")
    except (DegenerateRamification, ParameterCollision) as exc:
        payload["exchanged"] = {"degenerate": str(exc)}
        print(f"exchanged curve: degenerate ({exc})")
    _dump(cfg, "curves.json", payload)
    return EXIT_OK


def _curve_for(cfg, side):
    V = cfg.potential
    disc = solve_disc_data(V, cfg.order)
    return build_ordinary(V, disc) if side == "ordinary" else build_exchanged(V, disc)


def cmd_tr(cfg: RunConfig, side, g=None, n=None):
    curve = _curve_for(cfg, side)
    eng = TREngine(curve)
    todo = [(g, n)] if g is not None and n is not None else topologies(cfg.chi)
    out = []
    for gg, nn in todo:
        md = eng.omega(gg, nn)
        out.append(md.to_json())
        print(f"omega[{gg},{nn}] {curve.role}: denominators {list(md.dens)}, {len(md.numer.terms)} numerator terms")
    _dump(cfg, f"tr_{curve.role}.json", {"config": cfg.to_json(), "multidifferentials": out})
    return EXIT_OK


def _t0_table(table: CountTable):
    out = CountTable(table.kind, table.g, table.ks, provenance=table.provenance, v_limit=table.v_limit)
    for (V, prof), v in table.entries.items():
        if prof == ():
            out.entries[(V, prof)] = v
    if not out.entries:
        # every map without internal faces has V fixed by Euler's relation
        V = 2 - 2 * table.g - len(table.ks) + sum(table.ks) // 2
        out.add(V, (), 0)
    return out


def cmd_extract(cfg: RunConfig, side, g, ks, layer):
    if layer == "t0" and not cfg.potential.t:
        # the t^0 layer does not depend on the couplings; the exchanged curve needs one
        log.info("t0 layer read from a t4 = 1 run")
        cfg = RunConfig(couplings={4: "1"}, order=cfg.order, chi=cfg.chi, degree_cap=cfg.degree_cap,
                        edge_cap=cfg.edge_cap, out_dir=cfg.out_dir)
    curve = _curve_for(cfg, side)
    if side == "ordinary":
        table = extract_map_counts(curve, g, ks)
    else:
        table = extract_fsmap_counts(curve, g, ks)
    if layer == "t0":
        table = _t0_table(table)
    sys.stdout.write(table.to_csv())
    name = f"{side}_g{g}_k{'-'.join(map(str, ks))}"
    _write_text(cfg, name + ".csv", table.to_csv())
    _dump(cfg, name + ".json", {"config": cfg.to_json(), "table": table.to_json()})
    return EXIT_OK


def cmd_oracle(cfg: RunConfig, kind, g, ks, faces):
    V = cfg.potential
    degrees = tuple(j for j, _ in V.t) or (3, 4)
    if kind == "closed":
        ks = ()
    profile = profile_key(faces) if faces is not None else None
    table = census.oracle_counts(kind, g, ks, degrees=degrees, max_faces=cfg.edge_cap,
                                 cap=cfg.edge_cap, profile=profile)
    sys.stdout.write(table.to_csv())
    name = f"oracle_{kind}_g{g}_k{'-'.join(map(str, ks)) or 'none'}"
    _write_text(cfg, name + ".csv", table.to_csv())
    _dump(cfg, name + ".json", {"config": cfg.to_json(), "table": table.to_json()})
    return EXIT_OK


def cmd_verify(cfg: RunConfig):
    report = run_verification(cfg)
    for c in report.checks:
        print(f"{'PASS' if c.ok else 'FAIL'}  {c.name}")
    print(f"{len(report.checks) - len(report.failures())}/{len(report.checks)} checks passed")
    _dump(cfg, "verify.json", report.to_json())
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_report(cfg: RunConfig):
    V = cfg.potential
    disc = solve_disc_data(V, cfg.order)
    lines = [f"potential: {V.to_json() or 'Gaussian'}; order D = {cfg.order}"]
    lines.append(f"a   = {_leading(disc.a, 4)}")
    lines.append(f"c^2 = {_leading(disc.S, 4)}")
    o = build_ordinary(V, disc)
    for ks in ((1,), (2,), (4,)):
        t = extract_map_counts(o, 0, ks)
        lines.append(f"Map_0;{ks}: " + ", ".join(f"V={r['V']} [{r['faces']}] {r['count']}" for r in t.rows()[:5]))
    status = EXIT_OK
    if V.t:
        x = build_exchanged(V, disc)
        for ks in ((2,), (4,)):
            t = extract_fsmap_counts(x, 0, ks)
            lines.append(f"FSMap_0;{ks}: " + ", ".join(f"V={r['V']} [{r['faces']}] {r['count']}" for r in t.rows()[:5]))
        rep = run_verification(cfg)
        lines.append(f"verification: {len(rep.checks) - len(rep.failures())}/{len(rep.checks)} checks passed")
        lines.extend(f"  failed: {c.name}" for c in rep.failures())
        status = EXIT_OK if rep.ok else EXIT_FAIL
    else:
        lines.append("exchanged curve: degenerate for the Gaussian potential")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    _write_text(cfg, "report.txt", text)
    return status


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        cfg = resolve_config(args)
        if args.command == "curve":
            return cmd_curve(cfg)
        if args.command == "tr":
            return cmd_tr(cfg, args.side, args.g, args.n)
        if args.command == "extract":
            return cmd_extract(cfg, args.side, args.g, args.k, args.layer)
        if args.command == "oracle":
            return cmd_oracle(cfg, args.kind, args.g, args.k, args.faces)
        if args.command == "verify":
            return cmd_verify(cfg)
        return cmd_report(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DegenerateRamification, ParameterCollision) as exc:
        print(f"degenerate parameters: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except FsmapsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
