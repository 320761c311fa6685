"""Command line front end.

    concavex invariants --space 1 --bundle -1,-1 --cutoff 10
    concavex jfun --space 4 --bundle 5 --output json
    concavex oracle lines --n 4
    concavex selftest

Bundle grammar: summands separated by ``;``, degrees within a summand by
``,``.  Without any ``;`` a flat list is cut into summands of length
``l = number of factors``, so ``--space 1 --bundle -1,-1`` is
``O(-1) + O(-1)`` and ``--space 1,1 --bundle 2,0`` is ``O(2,0)``.

A ``--config`` file holds ``key = value`` lines with keys ``space``,
``bundle`` (JSON lists, e.g. ``bundle = [[5]]``), ``cutoff``, ``lambda``
and ``output``; flags override it.

Exit codes: 0 success, 1 computation error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .algebra import SpaceShape
from .errors import ConcavexError, ConfigError
from .geometry import BundleSpec, LineBundleSpec, TargetSpec, degree_rule, parse_key_values
from .oracle import lines_on_hypersurface

COMMANDS = ("ifun", "mirror", "jfun", "invariants", "oracle", "selftest")
DEFAULT_CUTOFF = 6
_VALUE_FLAGS = ("--space", "--bundle", "--cutoff", "--n", "--lambda", "--output", "--config")


@dataclass(frozen=True)
class RunConfig:
    command: str
    target: object = None
    cutoff: int = DEFAULT_CUTOFF
    lambda_policy: str = "keep"
    output: str = "table"
    n: int = None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _build_parser():
    parser = _Parser(prog="concavex", description="Twisted J-functions and enumerative invariants.")
    sub = parser.add_subparsers(dest="command")
    for name in ("ifun", "mirror", "jfun", "invariants"):
        p = sub.add_parser(name)
        p.add_argument("--config")
        p.add_argument("--space")
        p.add_argument("--bundle")
        p.add_argument("--cutoff")
        p.add_argument("--lambda", dest="lambda_policy")
        p.add_argument("--output")
    oracle = sub.add_parser("oracle")
    oracle.add_argument("what", choices=["lines"])
    oracle.add_argument("--n", required=True)
    oracle.add_argument("--output")
    sub.add_parser("selftest")
    return parser


def _glue_values(argv):
    """``--bundle -1,-1`` -> ``--bundle=-1,-1`` so negative degrees are not
    mistaken for options."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def _ints(text, what):
    text = text.strip()
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise ConfigError(f"malformed {what} {text!r}: expected comma-separated integers") from None


def parse_space(text):
    dims = _ints(text, "space")
    if not dims:
        raise ConfigError("empty --space")
    return dims


def parse_bundle(text, nfactors):
    text = text.strip()
    if not text:
        return []
    if ";" in text:
        groups = [_ints(g, "multidegree") for g in text.split(";") if g.strip()]
    else:
        flat = _ints(text, "multidegree")
        if len(flat) % nfactors:
            raise ConfigError(f"bundle {text!r} does not split into multidegrees of length {nfactors}")
        groups = [flat[i:i + nfactors] for i in range(0, len(flat), nfactors)]
    for g in groups:
        if len(g) != nfactors:
            raise ConfigError(f"multidegree {g} does not match a space with {nfactors} factors")
    return groups


def parse_config(argv):
    """``RunConfig`` from command line arguments (flags override ``--config``)."""
    args = _build_parser().parse_args(_glue_values(list(argv)))
    if args.command is None:
        raise ConfigError(f"missing command; choose one of {', '.join(COMMANDS)}")
    if args.command == "selftest":
        return RunConfig("selftest")
    if args.command == "oracle":
        n = _ints(args.n, "--n")
        if len(n) != 1:
            raise ConfigError(f"--n takes one integer, got {args.n!r}")
        return RunConfig("oracle", n=n[0], output=_output(args.output or "table"))

    values = {}
    if args.config:
        path = Path(args.config)
        if not path.is_file():
            raise ConfigError(f"config file {path} not found")
        values = parse_key_values(path.read_text())
        unknown = set(values) - {"space", "bundle", "cutoff", "lambda", "output"}
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")

    if args.space is not None:
        space = parse_space(args.space)
    elif "space" in values:
        space = values["space"]
        space = [space] if isinstance(space, int) else space
        if not isinstance(space, list) or not space or not all(isinstance(n, int) for n in space):
            raise ConfigError(f"malformed space {space!r}")
    else:
        raise ConfigError("no --space given")
    try:
        shape = SpaceShape(tuple(space))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None

    if args.bundle is not None:
        bundle = parse_bundle(args.bundle, shape.nfactors)
    else:
        bundle = values.get("bundle", [])
        if not isinstance(bundle, list) or not all(
                isinstance(m, list) and all(isinstance(a, int) for a in m) for m in bundle):
            raise ConfigError(f"malformed bundle {bundle!r}")
        for m in bundle:
            if len(m) != shape.nfactors:
                raise ConfigError(f"multidegree {m} does not match a space with {shape.nfactors} factors")

    cutoff = args.cutoff if args.cutoff is not None else values.get("cutoff", DEFAULT_CUTOFF)
    try:
        cutoff = int(cutoff)
    except (TypeError, ValueError):
        raise ConfigError(f"malformed cutoff {cutoff!r}") from None
    if cutoff < 1:
        raise ConfigError(f"cutoff must be >= 1, got {cutoff}")

    policy = args.lambda_policy or values.get("lambda", "keep")
    if policy not in ("keep", "limit"):
        raise ConfigError(f"--lambda must be keep or limit, got {policy!r}")
    output = _output(args.output or values.get("output", "table"))

    # polarity errors surface here and are computation errors, not config errors
    lines = tuple(LineBundleSpec(tuple(m)) for m in bundle)
    target = TargetSpec(shape, BundleSpec(lines))
    return RunConfig(args.command, target, cutoff, policy, output)


def _output(value):
    if value not in ("table", "json"):
        raise ConfigError(f"--output must be table or json, got {value!r}")
    return value


# -- rendering ------------------------------------------------------------

def _q(beta):
    if len(beta) == 1:
        return "q^0" if beta[0] == 0 else f"q^{beta[0]}"
    return "q^(" + ",".join(str(d) for d in beta) + ")"


def _series_lines(series):
    return [f"  {_q(b)}: {c}" for b, c in series.items()]


def _mirror_lines(m):
    lines = []
    if m.is_zero():
        lines.append("  all corrections vanish: J = I")
    for name, s in m.named():
        lines.append(f"  {name} = {s}")
    return lines


def _policy_series(series, policy):
    return series.lambda_limit() if policy == "limit" else series


def _policy_mirror(m, policy):
    if policy != "limit":
        return m
    from .mirror import MirrorData

    def lim(s):
        return s.map_coeffs(lambda c: c.lambda_limit())

    return MirrorData(lim(m.f0), lim(m.fminus1), tuple(lim(f) for f in m.fdivisor))


def _header(config):
    rule = degree_rule(config.target)
    return {
        "command": config.command,
        "target": config.target.to_dict(),
        "cutoff": config.cutoff,
        "lambda": config.lambda_policy,
        "degree_weights": list(rule.weights),
    }


def _run_pipeline_command(config, out):
    from .ifunction import build_I
    from .invariants import invariant_table
    from .mirror import apply_mirror, solve_mirror

    spec, policy = config.target, config.lambda_policy
    I = build_I(spec, config.cutoff)
    payload = _header(config)
    text = [f"target {spec}, cutoff {config.cutoff}, deg q = {payload['degree_weights']}, lambda {policy}"]
    if config.command == "ifun":
        shown = _policy_series(I, policy)
        payload["I"] = shown.to_dict()
        text += ["I ="] + _series_lines(shown)
    else:
        m = solve_mirror(I, spec)
        J = apply_mirror(I, m)
        shown_m = _policy_mirror(m, policy)
        payload["mirror"] = shown_m.to_dict()
        text += ["mirror corrections:"] + _mirror_lines(shown_m)
        if config.command == "jfun":
            shown = _policy_series(J, policy)
            payload["J"] = shown.to_dict()
            text += ["J ="] + _series_lines(shown)
        elif config.command == "invariants":
            table = invariant_table(J, spec)
            payload["invariants"] = table.to_dict()
            text += ["invariants (<J_beta, 1> = -2 K_beta / h^3 + ...):"]
            text += ["  " + line for line in table.to_csv().splitlines()]
    if config.output == "json":
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        out.write("\n".join(text) + "\n")


def run(config, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    if config.command == "selftest":
        from .acceptance import run_all

        results = run_all(out)
        failed = [r for r in results if not r.passed]
        print(f"{len(results) - len(failed)}/{len(results)} acceptance criteria passed", file=out)
        return 1 if failed else 0
    try:
        if config.command == "oracle":
            value = lines_on_hypersurface(config.n)
            if config.output == "json":
                out.write(json.dumps({"n": config.n, "lines": str(value)}) + "\n")
            else:
                out.write(f"{value}\n")
            return 0
        _run_pipeline_command(config, out)
    except ConcavexError as exc:
        print(f"error: {exc}", file=err)
        return 1
    except ValueError as exc:
        print(f"error: [{config.command}] {exc}", file=err)
        return 1
    return 0


def main(argv=None, out=None, err=None):
    err = err or sys.stderr
    argv = sys.argv[1:] if argv is None else argv
    try:
        config = parse_config(argv)
    except ConfigError as exc:
        print(f"error: {exc}", file=err)
        return 2
    except ConcavexError as exc:
        print(f"error: {exc}", file=err)
        return 1
    return run(config, out, err)


if __name__ == "__main__":
    sys.exit(main())
