"""Command-line entry point: ``mdimshift <subcommand> ...``.

Exit codes: 0 pass, 1 a check failed, 2 configuration error, 3 a request for an
undetermined coordinate of z, 4 depth or level capacity exhausted.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import analysis
from .construction import ConstructionState, block_membership, evaluate_z, z_patch
from .config import RunConfig, load_config, parse_int_list, parse_rational, parse_window
from .errors import ConfigError, MdimError
from .family import (
    FamilyConfig,
    build_family,
    build_minimal_witness,
    check_family,
    classify_window,
)
from .lattice import Window
from .render import ascii_strip, pgm_bytes
from .serialize import (
    dumps,
    load_state,
    report_doc,
    save_patch,
    save_state,
    write_atomic,
)

ALL_CHECKS = ("nesting", "density", "almost-periodic", "consistency", "membership", "enumeration", "fiber")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value run configuration file")
    p.add_argument("--t", type=parse_rational, help="target star density p/q in [0, 1)")
    p.add_argument("--alphabet", help="cube:m, interval:a:b or finite:k")
    p.add_argument("--sides", type=parse_int_list, help="tiling sides, each dividing the next")
    p.add_argument("--no-extend", action="store_true", help="do not extend the side list geometrically")
    p.add_argument("--dim", type=int)
    p.add_argument("--steps", type=int)
    p.add_argument("--mode", choices=("exact", "lazy", "skeleton"))
    p.add_argument("--n1", type=int)


def _state_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--state", help="state file written by 'build'")
    _config_args(p)


def _config(args) -> RunConfig:
    overrides = {
        "t": args.t,
        "alphabet": args.alphabet,
        "sides": args.sides,
        "dim": args.dim,
        "steps": args.steps,
        "mode": args.mode,
        "n1": args.n1,
        "extend": False if args.no_extend else None,
    }
    return load_config(args.config, overrides)


def _state(args) -> tuple[ConstructionState, RunConfig]:
    if getattr(args, "state", None):
        return load_state(args.state)
    config = _config(args)
    return config.build(), config


def _emit(args, name: str, payload) -> None:
    text = dumps(report_doc(name, payload))
    if getattr(args, "out", None):
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _window(args, state: ConstructionState) -> Window:
    if args.window:
        return parse_window(args.window, state.dim)
    return state.step(max(1, state.depth - 1)).shape


# --- subcommands --------------------------------------------------------------------


def cmd_build(args) -> int:
    config = _config(args)
    state = config.build()
    if args.out:
        save_state(state, config, args.out)
    else:
        from .serialize import state_doc

        sys.stdout.write(dumps(state_doc(state, config)))
    return 0


def run_checks(state: ConstructionState, checks) -> dict:
    """Run the named checks; each entry is "pass", "fail" or "skipped: reason"."""
    out = {}
    for name in checks:
        if name not in ALL_CHECKS:
            raise ConfigError(f"unknown check {name!r}; known: {', '.join(ALL_CHECKS)}")
        out[name] = _run_check(state, name)
    return out


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


def _run_check(state: ConstructionState, name: str) -> str:
    K = state.depth
    if name == "nesting":
        return _verdict(analysis.check_nesting(state).ok)
    if name == "density":
        return _verdict(analysis.density_report(state).ok)
    if name == "almost-periodic":
        if K < 2:
            return "skipped: needs two steps"
        return _verdict(analysis.check_almost_periodic(state, 1).ok)
    if name == "consistency":
        if K < 2:
            return "skipped: needs two steps"
        shape = state.step(K - 1).shape
        if shape.size > 1 << 16:
            return "skipped: window too large"
        return _verdict(all(evaluate_z(state, g, K - 1) == evaluate_z(state, g, K) for g in state.step(1).shape))
    if name == "membership":
        if K < 2:
            return "skipped: needs two steps"
        shape = state.step(K - 1).shape
        if shape.size > 1 << 16:
            return "skipped: window too large"
        patch = z_patch(state, shape)
        return _verdict(all(block_membership(patch, state, k) for k in range(1, K)))
    if name == "enumeration":
        if state.mode != "exact" or K < 2:
            return "skipped: exact mode with two steps only"
        return _verdict(analysis.check_enumeration(state, 2).ok)
    if name == "fiber":
        try:
            return _verdict(analysis.check_fiber_approximation(state, _z_on_J(state, 1), 1, Fraction(1, 2)).ok)
        except MdimError as exc:
            return f"skipped: {exc}"
    raise AssertionError(name)


def _z_on_J(state: ConstructionState, s: int) -> dict:
    from .construction import free_sets

    return {g: evaluate_z(state, g) for g in free_sets(state, s).J_cells()}


def cmd_verify(args) -> int:
    state, _ = _state(args)
    checks = [c.strip() for c in args.checks.split(",") if c.strip()] if args.checks else list(ALL_CHECKS)
    results = run_checks(state, checks)
    _emit(args, "verify", results)
    return 0 if all(not v.startswith("fail") for v in results.values()) else 1


def cmd_density(args) -> int:
    state, _ = _state(args)
    report = analysis.density_report(state)
    _emit(args, "density", report)
    return 0 if report.ok else 1


def cmd_estimate(args) -> int:
    state, _ = _state(args)
    k = args.k or state.depth
    window = parse_window(args.window, state.dim) if args.window else None
    g_range = None
    if args.translates:
        g_range = [(int(x),) * state.dim for x in args.translates.split(",")]
    est = analysis.mdim_estimate(state, k, args.m, window, g_range)
    _emit(args, "estimate", est)
    return 0 if est.ok else 1


def cmd_fiber(args) -> int:
    state, _ = _state(args)
    from .construction import free_sets

    if args.u:
        vals = [parse_rational(x) for x in args.u.split(",")]
        u = dict(zip(free_sets(state, args.s).J_cells(), vals))
    else:
        u = _z_on_J(state, args.s)
    res = analysis.check_fiber_approximation(state, u, args.s, parse_rational(args.eps))
    _emit(args, "fiber", res)
    return 0 if res.ok else 1


def cmd_family(args) -> int:
    config = FamilyConfig.default(args.nmax)
    fam = build_family(config)
    check = check_family(config)
    rows = []
    ok = check.ok
    for r in (parse_rational(x) for x in args.r.split(",")) if args.r else ():
        w = build_minimal_witness(config, r, steps=args.steps)
        dens = analysis.density_report(w.state)
        K = w.state.depth
        patch = z_patch(w.state, w.state.step(max(1, K - 1)).shape)
        cls = classify_window(patch, fam)
        ok = ok and dens.ok and cls.kind == "Y" and cls.n == w.n
        rows.append(
            {
                "r": r,
                "n": w.n,
                "level": w.y.level,
                "depth": K,
                "stopped": w.stopped,
                "density": dens,
                "classification": str(cls),
            }
        )
    payload = {
        "n_max": config.n_max,
        "check": check,
        "intervals": [{"n": y.n, "lo": y.interval.lo, "hi": y.interval.hi} for y in fam.ys],
        "Y": [{"n": y.n, "level": y.level, "stars": y.stars, "size": y.size} for y in fam.ys],
        "witnesses": rows,
    }
    _emit(args, "family", payload)
    return 0 if ok else 1


def cmd_export(args) -> int:
    state, _ = _state(args)
    patch = z_patch(state, _window(args, state))
    if not args.out:
        raise ConfigError("export needs --out")
    save_patch(patch, args.out)
    return 0


def cmd_render(args) -> int:
    state, _ = _state(args)
    window = _window(args, state)
    patch = z_patch(state, window)
    lo, hi = state.alphabet.lo, state.alphabet.hi
    if state.dim == 1:
        text = ascii_strip(patch, lo, hi) + "\n"
        if args.out:
            write_atomic(args.out, text)
        else:
            sys.stdout.write(text)
        return 0
    if state.dim == 2:
        if not args.out:
            raise ConfigError("PGM output needs --out")
        Path(args.out).write_bytes(pgm_bytes(patch, lo, hi))
        return 0
    raise ConfigError("render supports d = 1 and d = 2")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mdimshift", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("build", help="run the construction and write a state file")
    _config_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="run invariant checks")
    _state_args(p)
    p.add_argument("--checks", help=f"comma list from {','.join(ALL_CHECKS)}")
    p.add_argument("--out")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("density", help="star densities per step")
    _state_args(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("estimate", help="mean dimension bracket on a window")
    _state_args(p)
    p.add_argument("--k", type=int)
    p.add_argument("--m", type=int, default=16)
    p.add_argument("--window")
    p.add_argument("--translates", help="comma list of translates (default: all residues)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("fiber", help="approximate a fiber point by a translate of z")
    _state_args(p)
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--eps", default="1/2")
    p.add_argument("--u", help="values on J_s in star order (default: z itself)")
    p.add_argument("--out")
    p.set_defaults(func=cmd_fiber)

    p = sub.add_parser("family", help="interval family and minimal witnesses")
    p.add_argument("--nmax", type=int, default=6)
    p.add_argument("--r", help="comma list of target mean dimensions")
    p.add_argument("--steps", type=int, default=3)
    p.add_argument("--out")
    p.set_defaults(func=cmd_family)

    p = sub.add_parser("export", help="write z on a window as a patch file")
    _state_args(p)
    p.add_argument("--window")
    p.add_argument("--out")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("render", help="ASCII strip (d=1) or PGM image (d=2) of z")
    _state_args(p)
    p.add_argument("--window")
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    try:
        args = make_parser().parse_args(argv)
        return args.func(args)
    except MdimError as exc:
        print(f"mdimshift: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
