"""Command-line entry point ``boselat``.

Subcommands::

    boselat sector --modes L --particles N
    boselat spectrum --config F [--out DIR]
    boselat gate {H,NOT,Pphi,Cphi,Kerr} --config F --out DIR
    boselat fig2 --m1 INT --m2 INT --eps REAL --out DIR [--subtract caption|derivation]
    boselat leakage-scan --n INT --areas LIST --sigma-frac LIST --out DIR
    boselat run --config F --out DIR

Exit status: 0 success, 2 config error, 3 infeasible synthesis,
4 numerical tolerance violation.
"""

from __future__ import annotations

import argparse
import sys

from .config import GATES, ScenarioConfig, load_config
from .errors import ConfigError
from .scenarios import EXIT_CONFIG, run_scenario


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="boselat", description="Dual-rail gates on bosonic lattices")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sector", help="print a Fock sector")
    p.add_argument("--modes", type=int, required=True)
    p.add_argument("--particles", type=int, required=True)
    p.add_argument("--out")

    p = sub.add_parser("spectrum", help="single-qubit levels and degeneracy diagnostics")
    p.add_argument("--config", required=True)
    p.add_argument("--out")

    p = sub.add_parser("gate", help="synthesize, simulate and score one gate")
    p.add_argument("gate", choices=GATES)
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("fig2", help="|11> amplitude and phase during the controlled-phase gate")
    p.add_argument("--m1", type=int, default=2)
    p.add_argument("--m2", type=int, default=6)
    p.add_argument("--eps", type=float, default=1.0)
    p.add_argument("--subtract", choices=("caption", "derivation"), default="caption",
                   help="dynamical phase removed: exp(-2i eps t) (caption) or exp(-3i eps t) (derivation)")
    p.add_argument("--dt", type=float)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--out", required=True)

    p = sub.add_parser("leakage-scan", help="Rx-core leakage for Gaussian vs step tunneling pulses")
    p.add_argument("--n", type=int, default=30)
    p.add_argument("--areas", default="0.7853981633974483", help="logical rotation angles, comma separated")
    p.add_argument("--sigma-frac", default="0.125", help="Gaussian width / T, comma separated")
    p.add_argument("--eps", type=float, default=2.0)
    p.add_argument("--duration", type=float, default=4.0)
    p.add_argument("--dt", type=float)
    p.add_argument("--out", required=True)

    p = sub.add_parser("run", help="run any scenario config")
    p.add_argument("--config", required=True)
    p.add_argument("--out")
    return ap


def _config_from_args(args) -> tuple[ScenarioConfig, str | None]:
    if args.command == "sector":
        return ScenarioConfig("sector", {"modes": args.modes, "particles": args.particles}), args.out
    if args.command in ("spectrum", "run"):
        cfg = load_config(args.config)
        if args.command == "spectrum" and cfg.kind != "spectrum":
            raise ConfigError(f"{args.config} is a {cfg.kind!r} scenario, expected 'spectrum'")
        return cfg, args.out
    if args.command == "gate":
        cfg = load_config(args.config)
        if cfg.kind != "gate" or cfg.settings["gate"] != args.gate:
            raise ConfigError(f"{args.config} does not describe gate {args.gate}")
        return cfg, args.out
    if args.command == "fig2":
        numerics = {"stride": args.stride}
        if args.dt is not None:
            numerics["dt"] = args.dt
        settings = {"m1": args.m1, "m2": args.m2, "eps": args.eps, "subtract": args.subtract}
        return ScenarioConfig("fig2", settings, numerics=numerics), args.out
    settings = {
        "particles": args.n,
        "areas": args.areas,
        "sigma_fracs": args.sigma_frac,
        "eps": args.eps,
        "duration": args.duration,
        "step_fraction": 0.5,
    }
    numerics = {} if args.dt is None else {"dt": args.dt}
    return ScenarioConfig("leakage_scan", settings, numerics=numerics), args.out


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        cfg, out = _config_from_args(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    outcome = run_scenario(cfg, out)
    stream = sys.stdout if outcome.status == 0 else sys.stderr
    if outcome.message:
        print(outcome.message, file=stream)
    for f in outcome.files:
        print(f"wrote {f}")
    return outcome.status


if __name__ == "__main__":
    sys.exit(main())
