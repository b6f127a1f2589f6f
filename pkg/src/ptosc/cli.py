"""Command-line front end: ``ptosc {spectrum,solve,zeros,perturb,crossings,scan}``.

Every command writes one table as CSV (default) or JSON.  Exit status is
0 on success, 2 for configuration errors and 3 when a numerical quality
check fails.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from .errors import ConfigError, DomainError, NumericalQualityError
from .model import LevelIndex, ModelParams, alpha_from_coupling, crossings, spectrum
from .output import render
from .perturbation import (
    exact_vs_perturbative,
    first_order_oracle,
    rs_first_order,
    rs_second_order,
    second_order_oracle,
    unperturbed_level,
)
from .solver import Discretization, match_exact, solve_spectrum
from .special import WaveFunctionSpec, nodal_zeros

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3
COMMANDS = ("spectrum", "solve", "zeros", "perturb", "crossings", "scan")


@dataclass
class RunConfig:
    command: str
    alpha: float | None = None
    G: float | None = None
    c: float = 1.0
    L: float | None = None
    N: int = 1500
    scheme: str = "fd4"
    levels: int = 8
    alpha_min: float | None = None
    alpha_max: float | None = None
    alpha_step: float = 0.1
    n_max: int = 3
    basis: int = 40
    numeric: bool = False
    tol: float = 5e-4
    format: str = "csv"
    out: str | None = None
    quiet: bool = False
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if self.alpha is not None and self.G is not None:
            raise ConfigError("--alpha and --G are mutually exclusive")
        if self.command in ("spectrum", "solve", "zeros") and self.alpha is None and self.G is None:
            raise ConfigError(f"{self.command} needs exactly one of --alpha or --G")
        if self.levels < 1:
            raise ConfigError("--levels must be positive")
        if self.command == "crossings" and self.alpha_max is None:
            raise ConfigError("crossings needs --alpha-max")
        if self.command == "scan":
            if self.alpha_min is None or self.alpha_max is None:
                raise ConfigError("scan needs --alpha-min and --alpha-max")
            if not self.alpha_step > 0 or self.alpha_max < self.alpha_min:
                raise ConfigError("scan needs alpha-step > 0 and alpha-max >= alpha-min")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.format!r}")

    def model(self) -> ModelParams:
        try:
            alpha = self.alpha if self.alpha is not None else alpha_from_coupling(self.G)
            return ModelParams(alpha, self.c)
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc

    def disc(self, params: ModelParams) -> Discretization:
        try:
            return Discretization.default_for(params, half_width=self.L, points=self.N, scheme=self.scheme)
        except DomainError as exc:
            raise ConfigError(str(exc)) from exc

    def echo(self) -> dict:
        d = asdict(self)
        for key in ("out", "quiet", "extra"):
            d.pop(key)
        return d


def _sign(q: int) -> str:
    return "+" if q > 0 else "-"


def cmd_spectrum(cfg: RunConfig):
    p = cfg.model()
    rows = [{"q": _sign(lv.level.q), "n": lv.level.n, "E": lv.E} for lv in spectrum(p.alpha, cfg.levels)]
    return ["q", "n", "E"], rows, True


def cmd_solve(cfg: RunConfig):
    p = cfg.model()
    p.require_contour()
    res = solve_spectrum(p, cfg.disc(p), cfg.levels)
    rep = match_exact(res, p)
    rows = []
    for i, lv, E, err in rep.pairs:
        lam = res.eigenvalues[i]
        rows.append(
            {
                "index": i,
                "lambda_re": float(lam.real),
                "lambda_im": float(lam.imag),
                "residual": float(res.residuals[i]),
                "boundary_weight": float(res.boundary_weights[i]),
                "q": _sign(lv.q),
                "n": lv.n,
                "E_exact": E,
                "abs_error": err,
            }
        )
    ok = rep.max_error <= cfg.tol and not rep.ambiguous
    cols = ["index", "lambda_re", "lambda_im", "residual", "boundary_weight", "q", "n", "E_exact", "abs_error"]
    return cols, rows, ok


def cmd_zeros(cfg: RunConfig):
    p = cfg.model()
    rows = []
    for lv in spectrum(p.alpha, cfg.levels):
        rs = nodal_zeros(WaveFunctionSpec(lv.level, p))
        base = {"q": _sign(lv.level.q), "n": lv.level.n}
        for z in rs.poly_roots:
            rows.append({**base, "kind": "z_root", "re": float(z.real), "im": float(z.imag)})
        for x in rs.x_zeros:
            rows.append({**base, "kind": "x_zero", "re": float(x.real), "im": float(x.imag)})
        if rs.prefactor_zero is not None:
            z = rs.prefactor_zero
            rows.append({**base, "kind": "prefactor", "re": float(z.real), "im": float(z.imag)})
    return ["q", "n", "kind", "re", "im"], rows, True


def cmd_perturb(cfg: RunConfig):
    if not cfg.c > 0:
        raise ConfigError("perturb needs --c > 0")
    G = cfg.G if cfg.G is not None else (None if cfg.alpha is None else cfg.alpha**2 - 0.25)
    cols = ["q", "n", "e1", "e1_oracle", "e2", "e2_oracle", "e2_delta", "e2_extrapolated"]
    if G is not None:
        cols += ["G", "E_exact", "E_series", "residual"]
    rows = []
    for m in range(cfg.levels):
        lv = unperturbed_level(m)
        r2 = rs_second_order(lv, cfg.c, cfg.basis)
        row = {
            "q": _sign(lv.q),
            "n": lv.n,
            "e1": rs_first_order(lv, cfg.c),
            "e1_oracle": first_order_oracle(lv),
            "e2": r2.value,
            "e2_oracle": second_order_oracle(lv),
            "e2_delta": r2.delta,
            "e2_extrapolated": r2.extrapolated,
        }
        if G is not None:
            try:
                cmp_ = exact_vs_perturbative(lv, G, cfg.c, cfg.basis)
            except DomainError as exc:
                raise ConfigError(str(exc)) from exc
            row.update(G=float(G), E_exact=cmp_.E_exact, E_series=cmp_.E_series, residual=cmp_.residual)
        rows.append(row)
    return cols, rows, True


def cmd_crossings(cfg: RunConfig):
    rows = []
    for k, pairs in crossings(cfg.alpha_max, cfg.n_max):
        for up, down in pairs:
            rows.append(
                {
                    "alpha": k,
                    "q1": _sign(up.q),
                    "n1": up.n,
                    "q2": _sign(down.q),
                    "n2": down.n,
                    "E": 4.0 * up.n + 2.0 - 2.0 * k,
                }
            )
    return ["alpha", "q1", "n1", "q2", "n2", "E"], rows, True


def _alpha_grid(lo, hi, step):
    count = math.floor((hi - lo) / step + 1e-9) + 1
    return [lo + i * step for i in range(count)]


def cmd_scan(cfg: RunConfig):
    cols = ["alpha", "q", "n", "E"]
    if cfg.numeric:
        cols += ["lambda_re", "lambda_im", "abs_error"]
    rows, ok = [], True
    for a in _alpha_grid(cfg.alpha_min, cfg.alpha_max, cfg.alpha_step):
        if not a > 0:
            raise ConfigError(f"scan point alpha = {a} is not positive")
        levels = spectrum(a, cfg.levels)
        numeric = {}
        if cfg.numeric:
            p = ModelParams(a, cfg.c)
            res = solve_spectrum(p, cfg.disc(p), cfg.levels)
            rep = match_exact(res, p)
            ok = ok and rep.max_error <= cfg.tol
            numeric = {lv: (res.eigenvalues[i], err) for i, lv, _, err in rep.pairs}
        for lv in levels:
            row = {"alpha": float(a), "q": _sign(lv.level.q), "n": lv.level.n, "E": lv.E}
            if lv.level in numeric:
                lam, err = numeric[lv.level]
                row.update(lambda_re=float(lam.real), lambda_im=float(lam.imag), abs_error=err)
            rows.append(row)
    return cols, rows, ok


HANDLERS = {
    "spectrum": cmd_spectrum,
    "solve": cmd_solve,
    "zeros": cmd_zeros,
    "perturb": cmd_perturb,
    "crossings": cmd_crossings,
    "scan": cmd_scan,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    model = common.add_mutually_exclusive_group()
    model.add_argument("--alpha", type=float, help="core exponent alpha > 0")
    model.add_argument("--G", type=float, help="coupling G = alpha^2 - 1/4 > -1/4")
    common.add_argument("--c", type=float, default=1.0, help="contour shift (default 1)")
    common.add_argument("--L", type=float, help="grid half-width (default 10, 12 for alpha >= 3)")
    common.add_argument("--N", type=int, default=1500, help="interior grid points")
    common.add_argument("--scheme", choices=("fd2", "fd4"), default="fd4")
    common.add_argument("-k", "--levels", type=int, default=8)
    common.add_argument("--alpha-min", type=float)
    common.add_argument("--alpha-max", type=float)
    common.add_argument("--alpha-step", type=float, default=0.1)
    common.add_argument("--n-max", type=int, default=3, help="highest n in crossing pairs")
    common.add_argument("--basis", type=int, default=40, help="ladder states in second order")
    common.add_argument("--numeric", action="store_true", help="scan: add numeric eigenvalues")
    common.add_argument("--tol", type=float, default=5e-4, help="max abs error accepted by solve/scan")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--quiet", action="store_true")

    parser = _Parser(prog="ptosc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(**{k: v for k, v in vars(ns).items()})
    cfg.validate()
    return cfg


def run(cfg: RunConfig) -> int:
    cfg.validate()
    cols, rows, ok = HANDLERS[cfg.command](cfg)
    text = render(cfg.command, cfg.echo(), cols, rows, cfg.format)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)
    if not ok:
        if not cfg.quiet:
            print(f"ptosc {cfg.command}: tolerance {cfg.tol} not met", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    quiet = "--quiet" in argv
    try:
        return run(parse_config(argv))
    except (ConfigError, DomainError) as exc:
        if not quiet:
            print(f"ptosc: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalQualityError as exc:
        if not quiet:
            print(f"ptosc: numerical failure: {exc}", file=sys.stderr)
            for d in getattr(exc, "diagnostics", [])[:10]:
                print(f"  {d}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
