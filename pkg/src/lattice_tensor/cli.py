"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 input error, 3 size guard hit.
"""
from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from .congruence import congruence_lattice, is_simple, is_subdirectly_irreducible
from .dot import hasse_dot, lattice_dot
from .errors import LatticeError, SizeGuardExceeded
from .io import biideal_to_doc, congruence_to_doc, dumps, lattice_to_doc, load_lattice
from .order import DEFAULT_MAX_SIZE, atoms, is_distributive_lattice
from .suite import DEFAULT_CATALOG, run_suite, sort_reports
from .tensor import minimal_cap, tensor_product
from .theorem import full_sub_tensor_product, verify_embedding, verify_isomorphism

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    size_guard: int = DEFAULT_MAX_SIZE
    catalog_selection: tuple = DEFAULT_CATALOG
    output_dir: Optional[Path] = None
    emit_dot: bool = False
    json: bool = False

    def __post_init__(self):
        if self.size_guard < 2:
            raise ValueError("size guard must be at least 2")


def _safe(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "-", name).strip("-") or "x"


def _write(cfg: RunConfig, filename: str, text: str) -> Path:
    out = cfg.output_dir or Path(".")
    out.mkdir(parents=True, exist_ok=True)
    path = out / filename
    path.write_text(text)
    return path


def _emit(cfg: RunConfig, summary: dict, lines: Sequence[str]):
    if cfg.json:
        sys.stdout.write(dumps(summary))
    else:
        for line in lines:
            print(line)


def cmd_show(spec: str, cfg: RunConfig) -> int:
    name, L = load_lattice(spec)
    if L.size > cfg.size_guard:
        raise SizeGuardExceeded(cfg.size_guard, L.size)
    at = atoms(L)
    summary = {
        "name": name,
        "size": L.size,
        "atoms": [L.labels[i] for i in at],
        "distributive": is_distributive_lattice(L),
        "simple": is_simple(L) if L.size >= 2 else None,
        "subdirectly_irreducible": is_subdirectly_irreducible(L) if L.size >= 2 else None,
    }
    if cfg.emit_dot:
        summary["dot"] = str(_write(cfg, f"{_safe(name)}.dot", lattice_dot(name, L)))
    _emit(cfg, summary, [f"{k}: {v}" for k, v in summary.items()])
    return EXIT_OK


def cmd_tensor(spec_a: str, spec_b: str, cfg: RunConfig) -> int:
    a, A = load_lattice(spec_a)
    b, B = load_lattice(spec_b)
    T = tensor_product(A, B, cfg.size_guard)
    caps = [minimal_cap(T.element(i)).labelled(A, B) for i in range(min(T.size, 6))]
    summary = {
        "factors": [a, b],
        "size": T.size,
        "atoms": len(atoms(T.lattice)),
        "distributive": is_distributive_lattice(T.lattice),
        "sample_caps": caps,
    }
    stem = f"{_safe(a)}_x_{_safe(b)}"
    if cfg.output_dir is not None:
        doc = {"factors": [a, b], "size": T.size,
               "elements": [biideal_to_doc(T, i) for i in range(T.size)],
               "lattice": lattice_to_doc(T.lattice, f"{a} (x) {b}")}
        summary["written"] = str(_write(cfg, f"{stem}.json", dumps(doc)))
    if cfg.emit_dot:
        summary["dot"] = str(_write(cfg, f"{stem}.dot",
                                    hasse_dot(f"{a} (x) {b}", T.labels, T.lattice.poset.cover_pairs())))
    lines = [f"tensor {a} (x) {b}: size {T.size}, atoms {summary['atoms']}, "
             f"distributive={summary['distributive']}"]
    lines += [f"  cap {c}" for c in caps]
    _emit(cfg, summary, lines)
    return EXIT_OK


def cmd_con(spec: str, cfg: RunConfig) -> int:
    name, L = load_lattice(spec)
    con = congruence_lattice(L, cfg.size_guard)
    blocks = [congruence_to_doc(L.labels, p) for p in con.partitions]
    summary = {"name": name, "congruences": con.size, "blocks": blocks}
    stem = f"con_{_safe(name)}"
    if cfg.output_dir is not None:
        doc = {"lattice": lattice_to_doc(con.lattice, f"Con {name}"), "blocks": blocks}
        summary["written"] = str(_write(cfg, f"{stem}.json", dumps(doc)))
    if cfg.emit_dot:
        summary["dot"] = str(_write(cfg, f"{stem}.dot", lattice_dot(f"Con {name}", con.lattice)))
    lines = [f"Con {name}: {con.size} congruences"]
    lines += ["  " + " | ".join(",".join(str(x) for x in blk) for blk in bl) for bl in blocks]
    _emit(cfg, summary, lines)
    return EXIT_OK


def _write_reports(cfg: RunConfig, reports):
    if cfg.output_dir is None:
        return
    for r in reports:
        fname = "__".join([r.check] + [_safe(str(p)) for p in r.pair]) + ".json"
        _write(cfg, fname, dumps(r.to_dict()))


def _report_lines(reports):
    for r in reports:
        sizes = ", ".join(f"{k}={v}" for k, v in sorted(r.sizes.items()))
        tail = "" if r.passed else f"  witness={json.dumps(r.witness, ensure_ascii=False)}"
        yield f"{r.status.upper():4} {r.check} {' '.join(map(str, r.pair))} [{sizes}]{tail}"


def cmd_verify(scope: str, specs: Sequence[str], cfg: RunConfig) -> int:
    if scope == "suite":
        reports = run_suite(list(specs) or list(cfg.catalog_selection), cfg.size_guard)
    else:
        if len(specs) != 2:
            raise LatticeError(f"verify {scope} needs exactly two lattice specs")
        (a, A), (b, B) = load_lattice(specs[0]), load_lattice(specs[1])
        T = tensor_product(A, B, cfg.size_guard)
        if T.size > cfg.size_guard:
            raise SizeGuardExceeded(cfg.size_guard, T.size)
        C = full_sub_tensor_product(T)
        from .theorem import epsilon_setup
        data = epsilon_setup(A, B, C, cfg.size_guard)
        if scope == "embed":
            reports = [verify_embedding(A, B, C, (a, b), data)]
        else:
            reports = [verify_isomorphism(A, B, C, (a, b), data)[0]]
    reports = sort_reports(reports)
    _write_reports(cfg, reports)
    failed = sum(not r.passed for r in reports)
    summary = {"reports": [r.to_dict() for r in reports], "passed": len(reports) - failed,
               "failed": failed}
    lines = list(_report_lines(reports))
    lines.append(f"{len(reports) - failed} passed, {failed} failed")
    _emit(cfg, summary, lines)
    return EXIT_FAIL if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-size", type=int, default=argparse.SUPPRESS,
                        help=f"size guard for every enumeration (default {DEFAULT_MAX_SIZE})")
    common.add_argument("--out", type=Path, default=argparse.SUPPRESS, help="output directory")
    common.add_argument("--dot", action="store_true", default=argparse.SUPPRESS,
                        help="write Hasse diagrams in DOT format")
    common.add_argument("--catalog", default=argparse.SUPPRESS,
                        help="comma-separated lattice specs for 'verify suite'")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable summary on stdout")

    parser = argparse.ArgumentParser(
        prog="lattice-tensor", parents=[common],
        description="Tensor products of finite lattices, congruence lattices and their checks. "
                    "Lattice specs: @chain:n, @bool:n, @M3, @N5, @Mn:k, or a JSON file path.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("show", parents=[common], help="describe a lattice")
    p.add_argument("spec")
    p = sub.add_parser("tensor", parents=[common], help="build A (x) B")
    p.add_argument("a")
    p.add_argument("b")
    p = sub.add_parser("con", parents=[common], help="congruence lattice")
    p.add_argument("spec")
    p = sub.add_parser("verify", parents=[common], help="run checks")
    p.add_argument("scope", choices=["iso", "embed", "suite"])
    p.add_argument("specs", nargs="*")
    return parser


def _config(ns) -> RunConfig:
    catalog = getattr(ns, "catalog", None)
    selection = tuple(s.strip() for s in catalog.split(",") if s.strip()) if catalog else DEFAULT_CATALOG
    return RunConfig(
        size_guard=getattr(ns, "max_size", DEFAULT_MAX_SIZE),
        catalog_selection=selection,
        output_dir=getattr(ns, "out", None),
        emit_dot=getattr(ns, "dot", False),
        json=getattr(ns, "json", False),
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = _config(ns)
        if ns.command == "show":
            return cmd_show(ns.spec, cfg)
        if ns.command == "tensor":
            return cmd_tensor(ns.a, ns.b, cfg)
        if ns.command == "con":
            return cmd_con(ns.spec, cfg)
        return cmd_verify(ns.scope, ns.specs, cfg)
    except SizeGuardExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (LatticeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
