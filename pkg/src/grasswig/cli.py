"""``grasswig`` command line: generate, check and reconstruct projection maps.

Subcommands::

    grasswig gen-map --kind Unitary --d 4 --n 2 --trials 20 --out map.json
    grasswig check map.json
    grasswig reconstruct map.json
    grasswig angles p.json q.json
    grasswig aset-probe p.json q.json --samples 1024

Exit codes: 0 success (or map preserving), 1 violation or failed
classification, 2 bad input or usage.

Seeding: every random stream derives from one integer seed (``--seed``,
default ``$GRASSWIG_SEED`` or 0) through ``numpy.random.SeedSequence(seed)``
and its spawned children, which are indexed by a counter. In ``gen-map``
child 0 draws the generator and child 1 the random table inputs.
"""

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from .angles import ANGLE_TOL, classify_adjacency, principal_angles, transition_probability
from .aset import probe_aset
from .errors import GrasswigError, NotPreserving
from .extend import (
    PRESERVE_TOL,
    TabulatedOracle,
    check_transition_preserving,
    evaluate_oracle,
    projection_spanning_basis,
    rank_one_decomposition,
)
from .generators import GeneratorKind, make_generator
from .projections import random_projection
from .reconstruct import VERIFY_TOL, classify_map, probe_family
from .serialization import (
    ORACLE_FORMAT,
    classification_to_json,
    dump,
    matrix_to_json,
    oracle_file_to_table,
    projection_from_json,
    projection_to_json,
    table_to_json,
)

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    d: int | None
    n: int | None
    seed: int
    trials: int
    tol_validate: float | None
    tol_angle: float
    tol_verify: float
    tol_preserve: float

    def __post_init__(self):
        if self.d is not None and self.n is not None and not self.d > self.n >= 1:
            raise UsageError(f"need d > n >= 1, got d={self.d}, n={self.n}")
        if self.trials < 1:
            raise UsageError("--trials must be >= 1")
        tols = [self.tol_angle, self.tol_verify, self.tol_preserve]
        if self.tol_validate is not None:
            tols.append(self.tol_validate)
        if any(t <= 0 for t in tols):
            raise UsageError("tolerances must be positive")

    @classmethod
    def from_args(cls, args):
        return cls(
            args.d, args.n, args.seed, args.trials,
            args.tol_validate, args.tol_angle, args.tol_verify, args.tol_preserve,
        )


def _default_seed():
    raw = os.environ.get("GRASSWIG_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"grasswig: GRASSWIG_SEED must be an integer, got {raw!r}")


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as f:
            return json.load(f)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _emit(obj, out):
    text = dump(obj)
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _load_projection(path, cfg):
    try:
        return projection_from_json(_read_json(path), cfg.tol_validate)
    except (GrasswigError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from exc


def _load_table(path, cfg):
    try:
        table, d, n = oracle_file_to_table(_read_json(path), cfg.tol_validate)
    except (GrasswigError, KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from exc
    if (cfg.d is not None and cfg.d != d) or (cfg.n is not None and cfg.n != n):
        raise UsageError(f"{path} holds d={d}, n={n}, which contradicts --d/--n")
    return table, d, n


def build_oracle_document(kind, d, n, seed, trials):
    """Tabulate a generated map on the spanning basis, probe lifts and random inputs."""
    kind = GeneratorKind(kind)
    if kind.is_complement and d != 2 * n:
        raise UsageError(f"{kind.value} requires d = 2n, got d={d}, n={n}")
    s_gen, s_inputs = np.random.SeedSequence(seed).spawn(2)
    gen = make_generator(kind, d, n, s_gen)

    basis, _ = projection_spanning_basis(d, n)
    # rank-n projections whose ranges contain the rank-one probe vectors
    probes = [rank_one_decomposition(p, n).projections[1] for p in probe_family(d)]
    rng = np.random.default_rng(s_inputs)
    randoms = [random_projection(d, n, rng) for _ in range(trials)]

    inputs = basis + probes + randoms
    roles = ["basis"] * len(basis) + ["probe"] * len(probes) + ["random"] * len(randoms)
    outputs = [evaluate_oracle(gen, P) for P in inputs]
    table = TabulatedOracle(inputs, outputs, roles)
    return {
        "format": ORACLE_FORMAT,
        "d": d,
        "n": n,
        "seed": seed,
        "seeding": "numpy SeedSequence(seed).spawn(2): child 0 generator, child 1 random inputs",
        "entries": table_to_json(table),
        "truth": {"kind": kind.value, "operator": matrix_to_json(gen.operator)},
    }


def cmd_gen_map(args, cfg):
    if cfg.d is None or cfg.n is None:
        raise UsageError("gen-map needs --d and --n")
    doc = build_oracle_document(args.kind, cfg.d, cfg.n, cfg.seed, cfg.trials)
    _emit(doc, args.out)
    return EXIT_OK


def cmd_check(args, cfg):
    table, d, n = _load_table(args.oracle, cfg)
    try:
        rep = check_transition_preserving(table, d, n, cfg.trials, cfg.seed, cfg.tol_preserve)
    except GrasswigError as exc:
        raise UsageError(f"{args.oracle}: {exc}") from exc
    out = {"max_residual": rep.max_residual, "pairs_checked": rep.pairs_checked}
    if rep.violating_pair is not None:
        out["violating_pair"] = [projection_to_json(P) for P in rep.violating_pair]
    _emit(out, args.out)
    return EXIT_OK if rep.preserving else EXIT_VIOLATION


def cmd_reconstruct(args, cfg):
    table, d, n = _load_table(args.oracle, cfg)
    try:
        result = classify_map(
            table, d, n, seed=cfg.seed, trials=cfg.trials,
            tol_preserve=cfg.tol_preserve, tol_verify=cfg.tol_verify,
        )
    except NotPreserving as exc:
        out = {"error": "NotPreserving", "message": str(exc), "max_residual": exc.max_residual}
        if exc.witness is not None:
            out["violating_pair"] = [projection_to_json(P) for P in exc.witness]
        _emit(out, args.out)
        return EXIT_VIOLATION
    except GrasswigError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, args.out)
        return EXIT_VIOLATION
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _emit(classification_to_json(result), args.out)
    return EXIT_OK


def cmd_angles(args, cfg):
    P, Q = _load_projection(args.p, cfg), _load_projection(args.q, cfg)
    try:
        out = {
            "angles": [float(t) for t in principal_angles(P, Q)],
            "trace_product": transition_probability(P, Q),
            "adjacency_class": classify_adjacency(P, Q, cfg.tol_angle).value,
        }
    except GrasswigError as exc:
        raise UsageError(str(exc)) from exc
    _emit(out, args.out)
    return EXIT_OK


def cmd_aset_probe(args, cfg):
    P, Q = _load_projection(args.p, cfg), _load_projection(args.q, cfg)
    try:
        cls = classify_adjacency(P, Q, cfg.tol_angle)
        rep = probe_aset(P, Q, args.samples, cfg.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    except GrasswigError as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, args.out)
        return EXIT_VIOLATION
    _emit(
        {"class": cls.value, "dimension_estimate": rep.estimate.value, "n_members_found": rep.n_members},
        args.out,
    )
    return EXIT_OK


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--d", type=int, help="ambient dimension")
    common.add_argument("--n", type=int, help="projection rank")
    common.add_argument("--seed", type=int, default=None, help="master seed (default $GRASSWIG_SEED or 0)")
    common.add_argument("--trials", type=int, default=100, help="random samples / pairs")
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--tol-validate", type=float, default=None, help="projection validation tolerance")
    common.add_argument("--tol-angle", type=float, default=ANGLE_TOL, help="zero-angle tolerance")
    common.add_argument("--tol-verify", type=float, default=VERIFY_TOL, help="reconstruction residual bound")
    common.add_argument("--tol-preserve", type=float, default=PRESERVE_TOL, help="tr PQ preservation bound")

    parser = argparse.ArgumentParser(prog="grasswig", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-map", parents=[common], help="tabulate a generated map")
    p.add_argument("--kind", required=True, choices=[k.value for k in GeneratorKind])
    p.set_defaults(func=cmd_gen_map)

    p = sub.add_parser("check", parents=[common], help="test tr PQ preservation of a table")
    p.add_argument("oracle")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("reconstruct", parents=[common], help="classify a table and recover V")
    p.add_argument("oracle")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("angles", parents=[common], help="principal angles of two projections")
    p.add_argument("p")
    p.add_argument("q")
    p.set_defaults(func=cmd_angles)

    p = sub.add_parser("aset-probe", parents=[common], help="dimension probe of A_{P,Q}")
    p.add_argument("p")
    p.add_argument("q")
    p.add_argument("--samples", type=int, default=1024)
    p.set_defaults(func=cmd_aset_probe)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.seed is None:
        args.seed = _default_seed()
    try:
        cfg = ExperimentConfig.from_args(args)
        return args.func(args, cfg)
    except UsageError as exc:
        print(f"grasswig: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
