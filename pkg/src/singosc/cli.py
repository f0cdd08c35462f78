"""Command-line front end.

Subcommands:
  density       emit |psi|^2 curves (original and Darboux-transformed, both
                coherent families) as CSV files plus rendered figures
  verify        run a named check suite, print one line per check, exit
                nonzero on any FAIL
  localization  norms / means / widths over time plus the optimal-shift
                displacement metric, as CSV + figure
  moments       f- and Phi-moment verification table

Configuration may come from a key=value file with sections (see --config);
command-line flags override file values.  CSV output is deterministic:
comma-separated, '.' decimal point, 17 significant digits, '#'-prefixed
metadata header lines.
"""

from __future__ import annotations

import argparse
import configparser
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import report, verify
from .envelope import PAPER_FREE_PARTICLE, WRONSKIAN_HALF_I, FrequencyProfile
from .measures import f_moment, f_moment_target, phi_moment, phi_moment_target
from .numerics import RadialGrid
from .states import PhysParams

_CONVENTIONS = {"paper": PAPER_FREE_PARTICLE, "wronskian": WRONSKIAN_HALF_I}


@dataclass
class RunConfig:
    """Resolved run parameters shared by the data-emitting subcommands."""

    g: float = 2.0
    m: int = 1
    convention: str = "paper"
    times: list = field(default_factory=lambda: [0.0, 0.5, 1.0, 2.0])
    lam: float | None = None
    z: float | None = None
    grid_max: float = 30.0
    grid_n: int = 1200
    out: Path = Path("out")

    def params(self) -> PhysParams:
        return PhysParams.from_g(self.g, m_darboux=self.m)

    def labels(self) -> dict[str, complex]:
        defaults = report.default_labels(self.params())
        return {
            "bg": self.lam if self.lam is not None else defaults["bg"],
            "perelomov": self.z if self.z is not None else defaults["perelomov"],
        }

    def grid(self) -> RadialGrid:
        return RadialGrid.uniform(self.grid_n, self.grid_max)

    def convention_name(self) -> str:
        return _CONVENTIONS[self.convention]


def _fmt(v) -> str:
    if isinstance(v, complex):
        return f"{v.real:.17g}{v.imag:+.17g}j" if v.imag else f"{v.real:.17g}"
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def _write_csv(path: Path, meta: dict, header: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        with open(path, "w", newline="\n") as fh:
            for key, val in meta.items():
                fh.write(f"# {key} = {_fmt(val)}\n")
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")
    except OSError as exc:
        raise SystemExit(f"cannot write {path}: {exc}") from exc


def _load_config(path: str) -> dict:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise SystemExit(f"config file not found: {path}")
    merged: dict[str, str] = {}
    for section in parser.sections():
        merged.update(parser[section])
    return merged


def _resolve_config(args) -> RunConfig:
    cfg = RunConfig()
    if args.config:
        file_vals = _load_config(args.config)
        if "g" in file_vals:
            cfg.g = float(file_vals["g"])
        if "m" in file_vals:
            cfg.m = int(file_vals["m"])
        if "convention" in file_vals:
            cfg.convention = file_vals["convention"]
        if "times" in file_vals:
            cfg.times = [float(s) for s in file_vals["times"].split(",")]
        if "lambda" in file_vals:
            cfg.lam = float(file_vals["lambda"])
        if "z" in file_vals:
            cfg.z = float(file_vals["z"])
        if "grid_max" in file_vals:
            cfg.grid_max = float(file_vals["grid_max"])
        if "grid_n" in file_vals:
            cfg.grid_n = int(file_vals["grid_n"])
        if "out" in file_vals:
            cfg.out = Path(file_vals["out"])
    if args.g is not None:
        cfg.g = args.g
    if args.m is not None:
        cfg.m = args.m
    if args.convention is not None:
        cfg.convention = args.convention
    if args.times is not None:
        cfg.times = [float(s) for s in args.times.split(",")]
    if getattr(args, "lam", None) is not None:
        cfg.lam = args.lam
    if args.z is not None:
        cfg.z = args.z
    if args.grid_max is not None:
        cfg.grid_max = args.grid_max
    if args.grid_n is not None:
        cfg.grid_n = args.grid_n
    if args.out is not None:
        cfg.out = Path(args.out)
    if cfg.convention not in _CONVENTIONS:
        raise SystemExit(f"unknown convention {cfg.convention!r} (paper | wronskian)")
    if cfg.z is not None and abs(cfg.z) >= 1.0:
        raise SystemExit("Perelomov label requires |z| < 1")
    if not all(math.isfinite(t) for t in cfg.times):
        raise SystemExit("times must be finite")
    return cfg


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_density(cfg: RunConfig) -> int:
    params = cfg.params()
    grid = cfg.grid()
    labels = cfg.labels()
    profile = FrequencyProfile.zero()
    conv = cfg.convention_name()
    all_curves = {False: [], True: []}
    for transformed in (False, True):
        for family in report.FAMILIES:
            for t in cfg.times:
                curve = report.density_curve(
                    family, labels[family], t, params, profile, conv, grid,
                    transformed=transformed, m=cfg.m)
                all_curves[transformed].append(curve)
                stem = f"{family}{'_darboux_m' + str(cfg.m) if transformed else '_orig'}_t{t:g}"
                _write_csv(
                    cfg.out / f"{stem}.csv",
                    curve.meta,
                    ["x", "density"],
                    zip(grid.points, curve.density),
                )
    from .plotting import render_density_figure

    render_density_figure(all_curves[False], cfg.out / "density_original.png",
                          "coherent-state densities", x_limit=min(20.0, cfg.grid_max))
    render_density_figure(all_curves[True], cfg.out / f"density_darboux_m{cfg.m}.png",
                          f"Darboux-transformed densities (m={cfg.m})",
                          x_limit=min(20.0, cfg.grid_max))
    print(f"wrote {2 * len(report.FAMILIES) * len(cfg.times)} density files to {cfg.out}")
    return 0


def cmd_localization(cfg: RunConfig) -> int:
    params = cfg.params()
    grid = RadialGrid.uniform(max(cfg.grid_n, 3000), max(cfg.grid_max, 60.0))
    labels = cfg.labels()
    profile = FrequencyProfile.zero()
    conv = cfg.convention_name()
    rows = report.localization_rows(params, profile, conv, cfg.times, grid,
                                    labels=labels, m=cfg.m)
    meta = {"g": cfg.g, "k": params.k, "m": cfg.m, "convention": conv,
            "lambda": labels["bg"], "z": labels["perelomov"]}
    _write_csv(
        cfg.out / "localization.csv",
        meta,
        ["family", "transformed", "t", "norm", "mean_x", "sigma_x"],
        [[r["family"], int(r["transformed"]), r["t"], r["norm"], r["mean_x"], r["sigma_x"]]
         for r in rows],
    )

    disp_rows = []
    for family in report.FAMILIES:
        for t in cfg.times:
            orig = report.density_curve(family, labels[family], t, params, profile,
                                        conv, grid, transformed=False, m=cfg.m)
            trans = report.density_curve(family, labels[family], t, params, profile,
                                         conv, grid, transformed=True, m=cfg.m)
            metric = report.displacement_metric(orig, trans)
            disp_rows.append([family, t, metric["pre_shift_l2"], metric["post_shift_l2"],
                              metric["ratio"], metric["shift"]])
    _write_csv(
        cfg.out / "displacement.csv",
        meta,
        ["family", "t", "pre_shift_l2", "post_shift_l2", "ratio", "shift"],
        disp_rows,
    )
    from .plotting import render_localization_figure

    render_localization_figure(rows, cfg.out / "localization.png")
    print(f"wrote localization.csv, displacement.csv and localization.png to {cfg.out}")
    return 0


def cmd_moments(cfg: RunConfig) -> int:
    params = cfg.params()
    k = params.k
    rows = []
    for n in range(7):
        got = f_moment(n, k)
        want = f_moment_target(n, k)
        rows.append(["f", n, got, want, abs(got / want - 1.0)])
    for n in range(7):
        got = phi_moment(n, k, cfg.m)
        want = phi_moment_target(n, k, cfg.m)
        rows.append(["phi", n, got, want, abs(got / want - 1.0)])
    _write_csv(
        cfg.out / "moments.csv",
        {"g": cfg.g, "k": k, "m": cfg.m},
        ["weight", "n", "quadrature", "target", "rel_err"],
        rows,
    )
    print(f"wrote moments.csv to {cfg.out}")
    return 0


def cmd_verify(args) -> int:
    checks = verify.run_suite(args.suite)
    if args.tol is not None:
        checks = [
            verify.Check(c.name, c.value, args.tol, c.value <= args.tol, c.note)
            for c in checks
        ]
    print(verify.format_report(checks))
    return 1 if any(not c.passed for c in checks) else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="singosc",
        description=(
            "Exact states, coherent families and Darboux partners of the "
            "time-dependent singular oscillator: figure data, localization "
            "studies, and numerical verification of the closed-form identities."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(p):
        p.add_argument("--g", type=float, default=None, help="inverse-square coupling")
        p.add_argument("--m", type=int, default=None, help="Darboux index")
        p.add_argument("--convention", choices=sorted(_CONVENTIONS), default=None,
                       help="envelope normalization convention")
        p.add_argument("--times", type=str, default=None,
                       help="comma-separated time list")
        p.add_argument("--lambda", dest="lam", type=float, default=None,
                       help="lowering-eigenstate label")
        p.add_argument("--z", type=float, default=None,
                       help="disc label of the group-translated family")
        p.add_argument("--grid-max", dest="grid_max", type=float, default=None)
        p.add_argument("--grid-n", dest="grid_n", type=int, default=None)
        p.add_argument("--out", type=str, default=None, help="output directory")
        p.add_argument("--config", type=str, default=None,
                       help="key=value config file with sections")

    p_density = sub.add_parser("density", help="emit |psi|^2 curves as CSV + figure")
    add_run_flags(p_density)
    p_loc = sub.add_parser("localization",
                           help="norm / mean / width table and displacement metric")
    add_run_flags(p_loc)
    p_mom = sub.add_parser("moments", help="f- and Phi-moment verification table")
    add_run_flags(p_mom)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", nargs="?", default="all",
                          choices=("all",) + verify.SUITES)
    p_verify.add_argument("--tol", type=float, default=None,
                          help="override every tolerance in the suite")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "verify":
        return cmd_verify(args)
    cfg = _resolve_config(args)
    if args.command == "density":
        return cmd_density(cfg)
    if args.command == "localization":
        return cmd_localization(cfg)
    if args.command == "moments":
        return cmd_moments(cfg)
    raise SystemExit(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
