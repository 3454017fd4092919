"""Command-line entry point: exact tau/nu, bound verification over random families,
certificate constructions and instance generation.

Exit codes: 0 ok, 1 bound violated, 2 unreadable input, 3 solver budget exhausted,
4 internal invariant breach.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable

from . import graph6
from .graph import Graph, GraphError, figure1_graph
from .mis import DEFAULT_BUDGET, BudgetExceeded
from .ninefifths import NineFifthsError, nine_fifths_tp
from .planar import (
    PlanarTriangulation,
    TriangulationError,
    figure4_triangulation,
    packing_via_coloring,
    packing_with_external,
    random_triangulation,
    strip_triangulation,
    transversal_via_matching,
)
from .solvers import CertificateError, nu_exact, tau_exact
from .treedec import KTreeSeq, SequenceError, from_ktree_sequence, ktree_sequence_of, random_ktree_sequence

EXIT_OK, EXIT_VIOLATION, EXIT_PARSE, EXIT_BUDGET, EXIT_INTERNAL = 0, 1, 2, 3, 4

FAMILIES = ("tw6", "triangulation", "3tree")
PIPELINES = ("matching-transversal", "coloring-packing", "ninetp", "external-packing")

# family -> (bound name, tau <= a * nu + b)
BOUNDS: dict[str, tuple[str, Fraction, Fraction]] = {
    "tw6": ("tau <= 2 nu", Fraction(2), Fraction(0)),
    "triangulation": ("tau <= 3/2 nu", Fraction(3, 2), Fraction(0)),
    "3tree": ("tau <= 9/5 nu + 1/5", Fraction(9, 5), Fraction(1, 5)),
}
MIN_N = {"tw6": 7, "triangulation": 5, "3tree": 3}


class InputError(Exception):
    pass


# -- instances ---------------------------------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    graph: Graph
    triangulation: PlanarTriangulation | None = None
    sequence: KTreeSeq | None = None


def load_instance(path: str) -> Instance:
    """Read graph6, face-list JSON or 3-tree sequence JSON, sniffed from the content."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    stripped = text.strip()
    if not stripped:
        raise InputError(f"{path} is empty")
    if stripped[0] == "{":
        try:
            data = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON: {exc}") from exc
        try:
            if "faces" in data:
                t = PlanarTriangulation.from_json(data)
                return Instance(t.graph, triangulation=t)
            if "initial" in data:
                seq = KTreeSeq.from_json(data)
                return Instance(from_ktree_sequence(seq)[0], sequence=seq)
        except (TriangulationError, SequenceError, GraphError, ValueError, TypeError, KeyError) as exc:
            raise InputError(f"{path}: {exc}") from exc
        raise InputError(f"{path}: JSON has neither 'faces' nor 'initial'")
    lines = [ln for ln in stripped.splitlines() if ln.strip()]
    if len(lines) != 1:
        raise InputError(f"{path}: expected one graph6 line, found {len(lines)}")
    try:
        return Instance(graph6.decode(lines[0].strip()))
    except GraphError as exc:
        raise InputError(f"{path}: {exc}") from exc


def parse_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition("..")
    try:
        low = int(lo)
        high = int(hi) if sep else low
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from None
    if low > high:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return low, high


def instance_rng(seed: int, family: str, index: int) -> random.Random:
    return random.Random(f"{family}:{seed}:{index}")


def random_partial_6tree(n: int, rng: random.Random) -> Graph:
    """A random 6-tree on ``n`` vertices with each edge kept with probability 1/2."""
    g, _ = from_ktree_sequence(random_ktree_sequence(n, 6, rng))
    return Graph(n, [e for e in g.edges if rng.random() < 0.5])


def make_instance(family: str, n: int, rng: random.Random) -> Instance:
    if family == "tw6":
        return Instance(random_partial_6tree(n, rng))
    if family == "triangulation":
        t = random_triangulation(n, rng)
        return Instance(t.graph, triangulation=t)
    seq = random_ktree_sequence(n, 3, rng)
    return Instance(from_ktree_sequence(seq)[0], sequence=seq)


def instance_json(inst: Instance) -> dict:
    if inst.triangulation is not None:
        return inst.triangulation.to_json()
    if inst.sequence is not None:
        return inst.sequence.to_json()
    return {"graph6": graph6.encode(inst.graph).decode()}


def digest(obj) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


# -- reports ----------------------------------------------------------------------------------


@dataclass
class RunReport:
    id: str
    family: str
    n: int
    tau: int
    nu: int
    ratio: dict | None
    bound: str
    holds: bool
    wall_time: float
    digests: dict

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    @classmethod
    def from_json(cls, line: str) -> RunReport:
        return cls(**json.loads(line))


def _verify_one(job: tuple[str, int, int, int, int]) -> tuple[dict, dict | None, str | None]:
    family, seed, index, n, budget = job
    rng = instance_rng(seed, family, index)
    inst = make_instance(family, n, rng)
    start = time.perf_counter()
    try:
        x = tau_exact(inst.graph, budget)
        y = nu_exact(inst.graph, budget)
    except BudgetExceeded as exc:
        return {}, None, str(exc)
    elapsed = time.perf_counter() - start
    name, a, b = BOUNDS[family]
    holds = Fraction(x.size) <= a * y.size + b
    ratio = Fraction(x.size, y.size) if y.size else None
    report = RunReport(
        id=f"{family}-{seed}-{index}",
        family=family,
        n=inst.graph.n,
        tau=x.size,
        nu=y.size,
        ratio=None if ratio is None else {"num": ratio.numerator, "den": ratio.denominator},
        bound=name,
        holds=holds,
        wall_time=round(elapsed, 6),
        digests={
            "instance": digest(instance_json(inst)),
            "transversal": digest(x.to_json()),
            "packing": digest(y.to_json()),
        },
    )
    dump = None if holds else {"instance": instance_json(inst), "transversal": x.to_json(), "packing": y.to_json()}
    return asdict(report), dump, None


def _ordered_map(fn: Callable, jobs: list, workers: int) -> Iterable:
    if workers <= 1:
        return map(fn, jobs)
    pool = ProcessPoolExecutor(max_workers=workers)
    return _closing(pool, pool.map(fn, jobs))


def _closing(pool: ProcessPoolExecutor, results: Iterable) -> Iterable:
    try:
        yield from results
    finally:
        pool.shutdown(cancel_futures=True)


# -- commands ---------------------------------------------------------------------------------


def _emit(out, text: str) -> None:
    out.write(text + "\n")
    out.flush()


def cmd_tau(args, out) -> int:
    inst = load_instance(args.input)
    cert = tau_exact(inst.graph, args.budget)
    _emit(out, f"tau={cert.size}")
    _emit(out, json.dumps(cert.to_json(), sort_keys=True))
    return EXIT_OK


def cmd_nu(args, out) -> int:
    inst = load_instance(args.input)
    cert = nu_exact(inst.graph, args.budget)
    _emit(out, f"nu={cert.size}")
    _emit(out, json.dumps(cert.to_json(), sort_keys=True))
    return EXIT_OK


def cmd_verify(args, out) -> int:
    lo, hi = args.n
    if lo < MIN_N[args.family]:
        raise InputError(f"family {args.family} needs n >= {MIN_N[args.family]}")
    sizes = random.Random(f"sizes:{args.family}:{args.seed}")
    jobs = [(args.family, args.seed, i, sizes.randint(lo, hi), args.budget) for i in range(args.count)]
    status = EXIT_OK
    for report, dump, budget_error in _ordered_map(_verify_one, jobs, args.jobs):
        if budget_error is not None:
            print(budget_error, file=sys.stderr)
            return EXIT_BUDGET
        _emit(out, json.dumps(report, sort_keys=True))
        if dump is not None:
            print(f"bound violated on {report['id']}: {json.dumps(dump, sort_keys=True)}", file=sys.stderr)
            status = EXIT_VIOLATION
    return status


def _need_triangulation(inst: Instance, pipeline: str) -> PlanarTriangulation:
    if inst.triangulation is None:
        raise InputError(f"pipeline {pipeline} needs a face-list JSON triangulation")
    return inst.triangulation


def cmd_construct(args, out) -> int:
    inst = load_instance(args.input)
    g = inst.graph
    if args.pipeline == "ninetp":
        seq = inst.sequence
        if seq is None:
            try:
                seq = ktree_sequence_of(g, 3)
            except SequenceError as exc:
                raise InputError(f"ninetp needs a 3-tree: {exc}") from exc
        pair = nine_fifths_tp(seq)
        pair.x.validate(g)
        pair.y.validate(g)
        if 5 * pair.x.size > 9 * pair.y.size + 1:
            raise CertificateError("constructed pair violates 5|X| <= 9|Y| + 1")
        payload = {"pipeline": "ninetp", "x": pair.x.to_json(), "y": pair.y.to_json(),
                   "x_size": pair.x.size, "y_size": pair.y.size}
    else:
        t = _need_triangulation(inst, args.pipeline)
        build = {
            "matching-transversal": transversal_via_matching,
            "coloring-packing": packing_via_coloring,
            "external-packing": packing_with_external,
        }[args.pipeline]
        cert = build(t)
        cert.validate(g)
        payload = {"pipeline": args.pipeline, "certificate": cert.to_json(), "size": cert.size}
    _emit(out, json.dumps(payload, sort_keys=True))
    return EXIT_OK


def _generated(args) -> list[Instance]:
    if args.family == "figure1":
        return [Instance(figure1_graph())]
    if args.family == "figure4":
        t = figure4_triangulation()
        return [Instance(t.graph, triangulation=t)]
    if args.family == "strip":
        t = strip_triangulation(args.len)
        return [Instance(t.graph, triangulation=t)]
    lo, hi = args.n
    if lo < MIN_N[args.family]:
        raise InputError(f"family {args.family} needs n >= {MIN_N[args.family]}")
    sizes = random.Random(f"sizes:{args.family}:{args.seed}")
    return [
        make_instance(args.family, sizes.randint(lo, hi), instance_rng(args.seed, args.family, i))
        for i in range(args.count)
    ]


def _serialize(inst: Instance, fmt: str) -> str:
    if fmt == "g6":
        return graph6.encode(inst.graph).decode()
    if inst.triangulation is None and inst.sequence is None:
        raise InputError("faces-json output needs a triangulation or a 3-tree family")
    return json.dumps(instance_json(inst), sort_keys=True)


def cmd_gen(args, out) -> int:
    fmt = args.format or ("g6" if args.family in ("figure1", "tw6") else "faces-json")
    lines = [_serialize(inst, fmt) for inst in _generated(args)]
    if args.out is None:
        for line in lines:
            _emit(out, line)
        return EXIT_OK
    target = Path(args.out)
    if len(lines) == 1 and target.suffix:
        target.write_text(lines[0] + "\n")
        return EXIT_OK
    target.mkdir(parents=True, exist_ok=True)
    ext = "g6" if fmt == "g6" else "json"
    for i, line in enumerate(lines):
        (target / f"{args.family}-{i:04d}.{ext}").write_text(line + "\n")
    return EXIT_OK


# -- argument parsing -------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tuza", description="Triangle transversals and packings.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search-node budget per solver call")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, helptext in (("tau", cmd_tau, "minimum triangle transversal"),
                               ("nu", cmd_nu, "maximum triangle packing")):
        p = sub.add_parser(name, help=helptext, parents=[common])
        p.add_argument("input", help="graph6, face-list JSON or 3-tree sequence JSON")
        p.set_defaults(func=fn)

    p = sub.add_parser("verify", help="check a family's bound on random instances", parents=[common])
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--n", type=parse_range, default=None, help="vertex range A..B")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", help="build and re-check a certificate", parents=[common])
    p.add_argument("pipeline", choices=PIPELINES)
    p.add_argument("input")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("gen", help="write fixture or random instances", parents=[common])
    p.add_argument("family", choices=("figure1", "figure4", "strip") + FAMILIES)
    p.add_argument("--len", type=int, default=7, help="strip length")
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--n", type=parse_range, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=("g6", "faces-json"), default=None)
    p.add_argument("--out", default=None, help="file (single instance) or directory")
    p.set_defaults(func=cmd_gen)
    return parser


_DEFAULT_N = {"tw6": (7, 12), "triangulation": (5, 12), "3tree": (4, 14)}


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    if getattr(args, "n", False) is None and getattr(args, "family", None) in _DEFAULT_N:
        args.n = _DEFAULT_N[args.family]
    try:
        return args.func(args, out)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (NineFifthsError, CertificateError, TriangulationError, AssertionError) as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main_entry() -> None:
    try:
        code = main()
    except BrokenPipeError:
        # downstream reader closed early (e.g. piped into head)
        sys.stderr.close()
        code = EXIT_OK
    sys.exit(code)
