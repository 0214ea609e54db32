"""Command-line front end.

Four commands: `dim` runs the combinatorial search on a fan file, `gen`
writes fan files for the built-in families, `estimate` runs the
numerical rank oracle on a parametrization or implicit hypersurface,
and `verify` runs both sides and compares.

Machine output is JSON on standard output (or --output PATH), nothing
else; diagnostics go to the error stream.  Exit codes: 0 success,
2 bad input or parameters, 3 resource-limit refusal, 4 every sample
rejected, 5 verify found a mismatch.  Reruns with the same inputs and
flags produce byte-identical output.
"""

import argparse
import json
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .estimator import (
    DEFAULT_TOL,
    DEFAULT_TRIALS,
    EstimatorError,
    cross_check,
    estimate_rank,
    estimate_rank_implicit,
    parse_implicit,
    parse_parametrization,
)
from .families import curve_fan, orbit_subspace, torus_invariant, \
    tropical_hyperplane
from .polyhedral import format_complex, parse_complex, product
from .rational_linalg import canonicalize
from .subspace_search import (
    DEFAULT_CAP,
    DEFAULT_HEIGHT,
    ResourceLimitError,
    amoeba_dim,
)

_GEN_FAMILIES = ("hyperplane", "orbit", "curve", "torus_invariant", "product")


@dataclass(frozen=True)
class RunConfig:
    """One validated invocation, ready to execute."""

    command: str
    inputs: tuple = ()
    family: str | None = None
    params: tuple = ()
    kind: str | None = None
    strategy: str | None = None
    cap: int | None = None
    height: int | None = None
    trials: int = DEFAULT_TRIALS
    tol: float = DEFAULT_TOL
    seed: int = 0
    output: str | None = None

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("--trials must be at least 1")
        if not 0.0 < self.tol < 1.0:
            raise ValueError("--tol must lie strictly between 0 and 1")
        if self.cap is not None and self.cap < 1:
            raise ValueError("--cap must be at least 1")
        if self.height is not None and self.height < 0:
            raise ValueError("--height must not be negative")
        if self.strategy is None and (self.cap is not None
                                      or self.height is not None):
            raise ValueError("--cap and --height need an explicit --strategy")
        if self.strategy == "lattice" and self.height is not None:
            raise ValueError("--height does not apply to the lattice strategy")
        if self.strategy == "exhaustive" and self.cap is not None:
            raise ValueError("--cap does not apply to the exhaustive strategy")


def _strategy_descriptor(config: RunConfig) -> str | None:
    """Collapse the flag triple into the descriptor the search accepts.

    None means no flags were given, letting the search pick its
    ambient-dependent default.
    """
    if config.strategy is None:
        return None
    cap = config.cap if config.cap is not None else DEFAULT_CAP
    height = config.height if config.height is not None else DEFAULT_HEIGHT
    if config.strategy == "lattice":
        return f"lattice(cap={cap})"
    if config.strategy == "exhaustive":
        return f"exhaustive(height={height})"
    return f"combined(cap={cap},height={height})"


_UNIT_VECTOR = re.compile(r"\s*(-?)e([0-9]+)\s*\Z")


def parse_vector_list(text: str, ambient_dim: int) -> tuple:
    """Read the `e1;e2;-1,-1,-1` vector syntax.

    Semicolons separate vectors; each one is either the shorthand `ek`
    (`-ek` for the negative) or comma-separated rational coordinates.
    """
    vectors = []
    for chunk in text.split(";"):
        unit = _UNIT_VECTOR.match(chunk)
        if unit:
            k = int(unit.group(2))
            if not 1 <= k <= ambient_dim:
                raise ValueError(
                    f"e{k} does not exist in R^{ambient_dim}"
                )
            vec = [Fraction(0)] * ambient_dim
            vec[k - 1] = Fraction(-1 if unit.group(1) else 1)
            vectors.append(tuple(vec))
            continue
        parts = chunk.split(",")
        if len(parts) != ambient_dim:
            raise ValueError(
                f"vector {chunk.strip()!r} has {len(parts)} coordinates, "
                f"expected {ambient_dim}"
            )
        try:
            vectors.append(tuple(Fraction(p.strip()) for p in parts))
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(
                f"cannot read {chunk.strip()!r} as a rational vector"
            ) from exc
    if not vectors:
        raise ValueError("empty vector list")
    return tuple(vectors)


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _emit_json(doc: dict, output: str | None) -> None:
    _emit(json.dumps(doc, indent=2) + "\n", output)


def _int_param(raw: str, what: str) -> int:
    try:
        return int(raw)
    except ValueError as exc:
        raise ValueError(f"{what} must be an integer, got {raw!r}") from exc


def cmd_dim(config: RunConfig) -> int:
    sigma = parse_complex(_read_text(config.inputs[0]))
    result = amoeba_dim(sigma, strategy=_strategy_descriptor(config))
    _emit_json(result.to_json_dict(), config.output)
    return 0


def _params_exactly(config: RunConfig, count: int):
    if len(config.params) != count:
        raise ValueError(
            f"family {config.family} takes exactly {count} parameter(s), "
            f"got {len(config.params)}"
        )
    return config.params


def cmd_gen(config: RunConfig) -> int:
    family = config.family
    if family == "hyperplane":
        (raw_n,) = _params_exactly(config, 1)
        sigma = tropical_hyperplane(_int_param(raw_n, "ambient dimension"))
    elif family in ("orbit", "curve"):
        raw_n, raw_vectors = _params_exactly(config, 2)
        n = _int_param(raw_n, "ambient dimension")
        if n < 1:
            raise ValueError("ambient dimension must be positive")
        vectors = parse_vector_list(raw_vectors, n)
        build = orbit_subspace if family == "orbit" else curve_fan
        sigma = build(n, vectors)
    elif family == "torus_invariant":
        fan_path, raw_vectors = _params_exactly(config, 2)
        sigma0 = parse_complex(_read_text(fan_path))
        n = sigma0.ambient_dim
        sub = canonicalize(n, list(parse_vector_list(raw_vectors, n)))
        sigma = torus_invariant(sigma0, sub)
    elif family == "product":
        left_path, right_path = _params_exactly(config, 2)
        sigma = product(parse_complex(_read_text(left_path)),
                        parse_complex(_read_text(right_path)))
    else:
        raise ValueError(
            f"unknown family {family!r}; expected one of "
            + ", ".join(_GEN_FAMILIES)
        )
    _emit(format_complex(sigma) + "\n", config.output)
    return 0


def _run_estimator(config: RunConfig):
    text = _read_text(config.inputs[0])
    if config.kind == "param":
        return estimate_rank(parse_parametrization(text),
                             trials=config.trials, tol=config.tol,
                             seed=config.seed)
    return estimate_rank_implicit(parse_implicit(text),
                                  trials=config.trials, tol=config.tol,
                                  seed=config.seed)


def cmd_estimate(config: RunConfig) -> int:
    estimate = _run_estimator(config)
    _emit_json(estimate.to_json_dict(), config.output)
    return 0


def cmd_verify(config: RunConfig) -> int:
    sigma = parse_complex(_read_text(config.inputs[0]))
    shifted = RunConfig(
        command=config.command, inputs=config.inputs[1:], kind=config.kind,
        trials=config.trials, tol=config.tol, seed=config.seed,
    )
    estimate = _run_estimator(shifted)
    verdict = cross_check(sigma, estimate,
                          strategy=_strategy_descriptor(config))
    _emit_json(verdict.to_json_dict(), config.output)
    return 0 if verdict.verdict == "agree" else 5


_COMMANDS = {
    "dim": cmd_dim,
    "gen": cmd_gen,
    "estimate": cmd_estimate,
    "verify": cmd_verify,
}


def _add_strategy_flags(sub):
    sub.add_argument("--strategy", choices=("lattice", "exhaustive",
                                            "combined"))
    sub.add_argument("--cap", type=int)
    sub.add_argument("--height", type=int)


def _add_estimator_flags(sub):
    sub.add_argument("--kind", choices=("param", "implicit"), required=True)
    sub.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
    sub.add_argument("--tol", type=float, default=DEFAULT_TOL)
    sub.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="amoebadim",
        description="Dimension of amoebas from tropical data, two ways: "
                    "an exact combinatorial search and a numerical "
                    "sampling estimate.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    dim = commands.add_parser(
        "dim", help="combinatorial dimension of a fan file")
    dim.add_argument("fan", help="path to a fan file")
    _add_strategy_flags(dim)

    gen = commands.add_parser("gen", help="write fan files for the "
                                          "built-in families")
    gen.add_argument("family", help="one of " + ", ".join(_GEN_FAMILIES))
    gen.add_argument("params", nargs="*",
                     help="family parameters (see README)")

    estimate = commands.add_parser(
        "estimate", help="numerical rank of a sampled variety")
    estimate.add_argument("variety",
                          help="path to a parametrization or implicit file")
    _add_estimator_flags(estimate)

    verify = commands.add_parser(
        "verify", help="run both computations and compare")
    verify.add_argument("fan", help="path to a fan file")
    verify.add_argument("variety",
                        help="path to a parametrization or implicit file")
    _add_estimator_flags(verify)
    _add_strategy_flags(verify)

    for sub in (dim, gen, estimate, verify):
        sub.add_argument("--output", help="write the JSON here instead of "
                                          "standard output")
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    if args.command == "gen":
        return RunConfig(command="gen", family=args.family,
                         params=tuple(args.params), output=args.output)
    if args.command == "dim":
        return RunConfig(command="dim", inputs=(args.fan,),
                         strategy=args.strategy, cap=args.cap,
                         height=args.height, output=args.output)
    if args.command == "estimate":
        return RunConfig(command="estimate", inputs=(args.variety,),
                         kind=args.kind, trials=args.trials, tol=args.tol,
                         seed=args.seed, output=args.output)
    return RunConfig(command="verify", inputs=(args.fan, args.variety),
                     kind=args.kind, strategy=args.strategy, cap=args.cap,
                     height=args.height, trials=args.trials, tol=args.tol,
                     seed=args.seed, output=args.output)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        config = _config_from_args(args)
        return _COMMANDS[config.command](config)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except EstimatorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        # covers fan/variety format errors, purity violations, bad
        # strategy descriptors, and parameter-range failures
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
