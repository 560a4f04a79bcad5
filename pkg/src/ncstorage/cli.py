"""``nc-storage`` command line."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats
from .errors import NcStorageError
from .galois import TableMode, build_tables, validate_field
from .mdscodes import (
    GeneratorMatrix,
    MdsStatus,
    mds_witness,
    framed_rs_generator,
    rlnc_generator,
    rs_generator,
    sparsify,
    sparsest_generator,
    maximal_generator,
    weight_profile,
)
from .repair import Method, RepairMode, repair_node
from .simnet import (
    ComparisonConfig,
    assign_shares,
    random_source,
    rows_to_csv,
    run_comparison,
    storage_field,
)
from .storage import decode, encode, encode_vector, join_bytes, split_bytes
from .topology import Role, Topology


def _int(text: str) -> int:
    return int(text, 0)


def _field(args, n: int | None, k: int):
    if args.m is None:
        if args.poly is not None:
            raise ValueError("--poly needs --m")
        if n is None:
            raise ValueError("--m is required here")
        family = {"rs": "vandermonde", "g1g2": "rs"}.get(args.family, args.family)
        return storage_field(n, k, family)
    return validate_field(args.m, args.poly)


def _summary(g: GeneratorMatrix, witness=None) -> str:
    wp = weight_profile(g)
    verdict = {MdsStatus.VERIFIED: "yes", MdsStatus.FAILED: "no"}.get(g.mds_verified, "unverified")
    line = (
        f"MDS: {verdict}; zeros: {wp.zero_count}; "
        f"weights: {','.join(map(str, wp.column_weights))}"
    )
    if witness is not None:
        line += f"; dependent rows: {','.join(map(str, witness))}"
    return line


def cmd_gen(args) -> int:
    k = args.k
    spec = _field(args, args.n, k)
    fam = args.family
    if fam in ("maximal", "theorem4"):
        g = maximal_generator(spec, k)
    elif args.n is None:
        raise ValueError(f"--n is required for --family {fam}")
    elif fam == "rs":
        g = rs_generator(args.n, k, spec, args.points).verified()
    elif fam == "sparsest":
        if args.points is not None:
            g = sparsify(rs_generator(args.n, k, spec, args.points), args.pivots)
        elif args.pivots is not None:
            g = sparsify(sparsest_generator(args.n, k, spec), args.pivots)
        else:
            g = sparsest_generator(args.n, k, spec)
    elif fam == "rlnc":
        if args.seed is None:
            raise ValueError("--seed is required for --family rlnc")
        g = rlnc_generator(args.n, k, spec, args.seed)
    elif fam == "g1g2":
        g = framed_rs_generator(args.n, k, spec)
    else:  # argparse restricts choices
        raise ValueError(fam)
    text = formats.write_json(formats.matrix_to_json(g), args.out)
    if args.out is None:
        sys.stdout.write(text)
        print(_summary(g), file=sys.stderr)
    else:
        print(_summary(g))
    return 0


def cmd_check(args) -> int:
    g = formats.matrix_from_json(formats.read_json(args.matrix))
    witness = mds_witness(g, force=args.force)
    g = GeneratorMatrix(g.mat, g.family, MdsStatus.FAILED if witness else MdsStatus.VERIFIED)
    print(_summary(g, witness if args.witness else None))
    return 0 if witness is None else 1


def cmd_encode(args) -> int:
    g = formats.matrix_from_json(formats.read_json(args.matrix))
    raw = Path(args.input).read_bytes()
    data = split_bytes(raw, g.k, g.spec)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for share in encode(g, data):
        formats.write_json(
            formats.share_to_json(share, k=g.k, data_length=len(raw)),
            out / f"share_{share.index:03d}.json",
        )
    print(f"wrote {g.n} shares of {data.block_len} symbols to {out}")
    return 0


def cmd_decode(args) -> int:
    objs = [formats.read_json(p) for p in args.input]
    shares = [formats.share_from_json(o) for o in objs]
    source = decode(shares)
    length = args.length if args.length is not None else objs[0].get("data_length")
    if length is None:
        raise ValueError("share files carry no data_length; pass --length")
    Path(args.out).write_bytes(join_bytes(source, int(length)))
    print(f"recovered {length} bytes from shares {[s.index for s in shares[:source.k]]}")
    return 0


def cmd_repair(args) -> int:
    topo = Topology.from_json(formats.read_json(args.topo))
    n_storage = len(topo.ids([Role.STORAGE]))
    if args.matrix:
        g = formats.matrix_from_json(formats.read_json(args.matrix))
    else:
        if args.k is None:
            raise ValueError("pass --matrix or --k")
        if args.m is None:
            spare = 1 if args.mode == "functional" else 0
            spec = storage_field(n_storage, args.k, "sparsest", spare)
        else:
            spec = validate_field(args.m, args.poly)
        g = sparsest_generator(n_storage, args.k, spec)
    data = random_source(g.spec, g.k, args.block_len, args.seed)
    shares = assign_shares(topo, g, data)
    outcome = repair_node(topo, shares, args.failed, g, RepairMode(args.mode), Method(args.method))
    new = outcome.new_share
    report = {
        "failed": args.failed,
        "method": args.method,
        "mode": args.mode,
        "plan": outcome.plan.to_json() if outcome.plan else None,
        "new_share": formats.share_to_json(new),
        "energy": outcome.energy.to_json(),
        "max_buffer": {str(u): b for u, b in sorted(outcome.max_buffer.items())},
        "verified": new.payload == encode_vector(new.coding_vector, data),
    }
    text = formats.write_json(report, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return 0


def _config_from_json(obj: dict) -> tuple[str, ComparisonConfig]:
    experiment = obj.get("experiment", "comparison").lower()
    if experiment == "field_tables":
        return experiment, ComparisonConfig()
    topo_cfg = obj.get("topology", {})
    cfg = ComparisonConfig(
        seeds=tuple(obj.get("seeds", ())),
        k_values=tuple(obj.get("k_values", range(3, 9))),
        families=tuple(obj.get("families", ("sparsest", "rs", "rlnc"))),
        regime=topo_cfg.get("regime", "random"),
        n_storage=topo_cfg.get("n_storage", 10),
        n_sensor=topo_cfg.get("n_sensor", 20),
        area=tuple(topo_cfg.get("area", (200.0, 180.0))),
        radius=topo_cfg.get("radius", 60.0),
        redundancy=obj.get("redundancy", 2),
        repair_family=obj.get("code", {}).get("family", "sparsest"),
        repair_mode=obj.get("code", {}).get("mode", "exact"),
    )
    if "field" in obj:
        cfg.spec = formats.field_from_json(obj["field"])
    if "file" in topo_cfg:
        cfg.topology = Topology.from_json(formats.read_json(topo_cfg["file"]))
    methods = {
        "storage": ("storage",),
        "repair": ("nc", "traditional"),
        "comparison": ("storage", "nc", "traditional"),
    }
    if experiment not in methods:
        raise ValueError(f"unknown experiment {experiment!r}")
    cfg.methods = tuple(obj.get("methods", methods[experiment]))
    randomized = cfg.topology is None and cfg.regime != "one-hop" or "rlnc" in cfg.families
    if randomized and not cfg.seeds:
        raise ValueError("randomized experiments need an explicit \"seeds\" list")
    if not cfg.seeds:
        cfg.seeds = (0,)
    return experiment, cfg


def field_table_rows() -> list[dict]:
    rows = []
    for m, mode in ((8, TableMode.LOG_ANTILOG_1D), (4, TableMode.LOG_ANTILOG_1D), (4, TableMode.MUL_DIV_2D), (8, TableMode.MUL_DIV_2D)):
        t = build_tables(validate_field(m), mode)
        rows.append({"m": m, "mode": mode.value, "memory_bytes": t.memory_bytes})
    return rows


def cmd_simulate(args) -> int:
    experiment, cfg = _config_from_json(formats.read_json(args.config))
    if experiment == "field_tables":
        rows = field_table_rows()
        text = "m,mode,memory_bytes\n" + "".join(
            f"{r['m']},{r['mode']},{r['memory_bytes']}\n" for r in rows
        )
        Path(args.out).write_text(text)
        print("/".join(str(r["memory_bytes"]) for r in rows[:3]))
        return 0
    rows = run_comparison(cfg)
    rows_to_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def cmd_tables(args) -> int:
    if args.m is None:
        rows = field_table_rows()
        for r in rows:
            print(f"GF(2^{r['m']}) {r['mode']}: {r['memory_bytes']} bytes")
        print("/".join(str(r["memory_bytes"]) for r in rows[:3]))
        return 0
    tables = build_tables(validate_field(args.m, args.poly), TableMode(args.mode))
    print(f"GF(2^{args.m}) {args.mode}: {tables.memory_bytes} bytes (generator {tables.generator})")
    if args.dump:
        tables.dump_csv(args.dump)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nc-storage", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def field_args(sp):
        sp.add_argument("--m", type=int, help="extension degree (field GF(2^m))")
        sp.add_argument("--poly", type=_int, help="reduction polynomial, e.g. 0xB")

    sp = sub.add_parser("gen", help="construct a generator matrix")
    sp.add_argument("--family", required=True, choices=["sparsest", "rs", "maximal", "theorem4", "rlnc", "g1g2"])
    sp.add_argument("--n", type=int)
    sp.add_argument("--k", type=int, required=True)
    field_args(sp)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--points", type=_int, nargs="+", help="evaluation points (rs/sparsest)")
    sp.add_argument("--pivots", type=int, nargs="+", help="pivot rows for sparsest")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("check", help="exhaustive MDS check of a matrix file")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--witness", action="store_true", help="print a dependent k-subset")
    sp.add_argument("--force", action="store_true", help="allow n above the exhaustive bound")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("encode", help="split a file into n share files")
    sp.add_argument("--matrix", required=True)
    sp.add_argument("--in", dest="input", required=True)
    sp.add_argument("--out", required=True, help="output directory")
    sp.set_defaults(func=cmd_encode)

    sp = sub.add_parser("decode", help="rebuild a file from k share files")
    sp.add_argument("--in", dest="input", nargs="+", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--length", type=int)
    sp.set_defaults(func=cmd_decode)

    sp = sub.add_parser("repair", help="repair one storage node of a topology")
    sp.add_argument("--topo", required=True)
    sp.add_argument("--failed", type=int, required=True)
    sp.add_argument("--mode", choices=["exact", "functional"], default="exact")
    sp.add_argument("--method", choices=["nc", "traditional"], default="nc")
    sp.add_argument("--matrix")
    sp.add_argument("--k", type=int)
    field_args(sp)
    sp.add_argument("--seed", type=int, required=True, help="seed for the random source data")
    sp.add_argument("--block-len", type=int, default=8)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_repair)

    sp = sub.add_parser("simulate", help="run an experiment config, write CSV")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("tables", help="lookup-table memory report")
    sp.add_argument("--m", type=int)
    sp.add_argument("--poly", type=_int)
    sp.add_argument("--mode", choices=["1d", "2d"], default="1d")
    sp.add_argument("--dump", help="write the tables as CSV")
    sp.set_defaults(func=cmd_tables)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NcStorageError as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(err), file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc)}
        print(json.dumps(err), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
