"""``krawpoly`` command line: ``table``, ``validate``, ``params`` and ``oracle``.

Exit status: 0 on success, 1 when a requested check fails, 2 on invalid
input, 3 when the rotation does not admit the requested computation (the
diagnostic names the vanishing entries).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from . import __version__, multivariate, params, tratnik
from .errors import InconsistencyError, InputError, KrawpolyError, SingularParametrizationError
from .family import KrawtchoukFamily
from .fock_basis import enumerate_basis
from .oracle import representation_matrix
from .rotations import Generator, check_rotation, euler_factors, exp_generator, plane_generator, random_rotation
from .tableio import Table, TableRow, format_float
from .validation import DEFAULT_TOLERANCES, run_suite

__all__ = ["RunConfig", "RotationSpec", "build_parser", "load_config", "main"]

COMMANDS = ("table", "validate", "params", "oracle")
ROTATION_KINDS = ("euler", "plane", "matrix", "generator", "random")
PLANE_NAMES = {"xy": (1, 2), "xz": (1, 3), "yz": (2, 3)}
SEED_ENV = "KRAWPOLY_SEED"
RANDOM_MIN_ABS = 0.1

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_DOMAIN = 0, 1, 2, 3


# -- rotation specs -------------------------------------------------------------


def _numbers(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"cannot parse numbers from {text!r}") from None


def _matrix(text: str) -> list[list[float]]:
    return [_numbers(row) for row in text.split(";")]


def _plane_terms(text: str) -> list[tuple[str, float]]:
    terms = []
    for item in text.split(","):
        name, sep, angle = item.partition(":")
        if not sep:
            raise InputError(f"plane term {item!r} must look like 'yz:0.5' or '1-4:0.3'")
        terms.append((name.strip(), _numbers(angle)[0]))
    return terms


def _plane_axes(name: str) -> tuple[int, int]:
    if name in PLANE_NAMES:
        return PLANE_NAMES[name]
    a, sep, b = name.partition("-")
    try:
        return int(a), int(b)
    except ValueError:
        raise InputError(f"unknown plane {name!r}; use xy, xz, yz or 'a-b' with 1-based axes") from None


@dataclass(frozen=True)
class RotationSpec:
    """One way of naming a rotation; ``value`` is already parsed."""

    kind: str
    value: object

    def resolve(self, d: int, degrees: bool = False, seed: int = 0):
        """``(R, factors)``; ``factors`` are generators whose product is R, or None."""
        size = d + 1
        unit = np.pi / 180.0 if degrees else 1.0
        if self.kind == "euler":
            if d != 2:
                raise InputError("Euler angles are defined for d = 2")
            angles = [a * unit for a in self.value]
            if len(angles) != 3:
                raise InputError("--euler takes three angles phi,theta,chi")
            factors = euler_factors(angles)
        elif self.kind == "plane":
            factors = [plane_generator(size, _plane_axes(n), a * unit) for n, a in self.value]
        elif self.kind == "generator":
            B = np.asarray(self.value, dtype=float)
            if B.ndim == 1:
                gen = Generator(size, tuple(B))
            else:
                gen = Generator.from_matrix(B)
            if gen.size != size:
                raise InputError(f"generator has size {gen.size}, expected {size}")
            factors = [gen]
        elif self.kind == "matrix":
            R = check_rotation(np.asarray(self.value, dtype=float), tol=1e-10)
            if R.shape != (size, size):
                raise InputError(f"matrix has shape {R.shape}, expected {(size, size)}")
            return R, None
        elif self.kind == "random":
            return random_rotation(size, np.random.default_rng(seed), min_abs=RANDOM_MIN_ABS), None
        else:
            raise InputError(f"unknown rotation kind {self.kind!r}")
        R = np.eye(size)
        for g in factors:
            R = R @ exp_generator(g)
        return R, factors

    def describe(self) -> str:
        return f"{self.kind}:{json.dumps(self.value)}"


def _spec_from_config(obj: dict) -> RotationSpec:
    (kind, value), = obj.items()
    if kind == "plane":
        value = [(str(n), float(a)) for n, a in value]
    return RotationSpec(kind, value)


# -- configuration --------------------------------------------------------------


@dataclass
class RunConfig:
    command: str
    d: int = 2
    N: int = 2
    rotation: RotationSpec | None = None
    degrees: bool = False
    family: str = "P"
    route: str = "auto"
    tolerances: dict = field(default_factory=dict)
    format: str = "csv"
    seed: int = 0
    p: tuple[float, ...] | None = None
    corrupt: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.N < 0:
            raise InputError("N must be >= 0")
        if self.d < 1:
            raise InputError("d must be >= 1")
        for name, value in self.tolerances.items():
            if not value > 0:
                raise InputError(f"tolerance {name} must be positive")
        if self.command == "params" and self.p is not None:
            if self.rotation is not None:
                raise InputError("give either a rotation or --p, not both")
        elif self.rotation is None:
            raise InputError("exactly one rotation spec is required: " + ", ".join("--" + k for k in ROTATION_KINDS))

    def rotation_and_rep(self):
        R, factors = self.rotation.resolve(self.d, self.degrees, self.seed)
        if factors is None:
            rep = representation_matrix(R, N=self.N)
        else:
            rep = representation_matrix(factors=factors, N=self.N)
            rep = type(rep)(rep.basis, rep.U, R)
        return R, rep


def load_config(path: str) -> dict:
    """Read and schema-check a JSON config file."""
    import jsonschema

    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    schema = json.loads(resources.files(__package__).joinpath("config.schema.json").read_text(encoding="utf-8"))
    try:
        jsonschema.validate(obj, schema)
    except jsonschema.ValidationError as exc:
        raise InputError(f"config {path}: {exc.message}") from None
    return obj


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="krawpoly", description="Multivariate Krawtchouk polynomials from rotation matrix elements.")
    parser.add_argument("--version", action="version", version=f"krawpoly {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "table": "tabulate W, P, Q or Tratnik values",
        "validate": "run the identity suites and report residuals",
        "params": "convert between R, u, p and eta (JSON)",
        "oracle": "representation matrix and route comparison against it",
    }
    for name in COMMANDS:
        p = sub.add_parser(name, help=helps[name])
        p.add_argument("--config", help="JSON config file; flags override its keys")
        p.add_argument("--d", type=int)
        p.add_argument("--N", type=int)
        rot = p.add_mutually_exclusive_group()
        rot.add_argument("--euler", metavar="PHI,THETA,CHI")
        rot.add_argument("--plane", metavar="yz:A,xz:B", help="product of plane rotations, left to right")
        rot.add_argument("--matrix", metavar="ROWS", help="rows separated by ';', entries by ','")
        rot.add_argument("--generator", metavar="ROWS", help="antisymmetric B, as rows or its upper triangle")
        rot.add_argument("--random", action="store_true", help="random generic rotation from the seed")
        p.add_argument("--degrees", action="store_true", default=None, help="angles in degrees")
        p.add_argument("--seed", type=int, help=f"random seed (overrides ${SEED_ENV})")
        p.add_argument("--format", choices=["csv", "json"])
        p.add_argument("--output", "-o", help="write to a file instead of stdout")
        p.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE", help="tolerance override")
        if name == "table":
            p.add_argument("--family", choices=["W", "P", "Q", "tratnik"])
            p.add_argument("--route", choices=["auto", "raising", "oracle", "generating", "hypergeometric"])
        if name == "validate":
            p.add_argument("--corrupt", action="store_true", default=None, help="test hook: corrupt the P table")
        if name == "params":
            p.add_argument("--p", metavar="P1,P2,P3,P4", help="four numbers instead of a rotation")
    return parser


def config_from_args(args: argparse.Namespace, environ=os.environ) -> RunConfig:
    base = load_config(args.config) if args.config else {}
    if base.get("command", args.command) != args.command:
        raise InputError(f"config is for command {base['command']!r}, not {args.command!r}")
    kw: dict = {"command": args.command}
    for key in ("d", "N", "degrees", "family", "route", "format", "corrupt"):
        val = getattr(args, key, None)
        if val is None:
            val = base.get(key)
        if val is not None:
            kw[key] = val
    seed = args.seed
    if seed is None and environ.get(SEED_ENV):
        try:
            seed = int(environ[SEED_ENV])
        except ValueError:
            raise InputError(f"${SEED_ENV} must be an integer") from None
    if seed is None:
        seed = base.get("seed", 0)
    kw["seed"] = seed
    tols = dict(base.get("tolerances", {}))
    for item in args.tol:
        name, sep, value = item.partition("=")
        if not sep:
            raise InputError(f"--tol expects NAME=VALUE, got {item!r}")
        tols[name] = _numbers(value)[0]
    kw["tolerances"] = tols
    spec = None
    if args.euler is not None:
        spec = RotationSpec("euler", _numbers(args.euler))
    elif args.plane is not None:
        spec = RotationSpec("plane", _plane_terms(args.plane))
    elif args.matrix is not None:
        spec = RotationSpec("matrix", _matrix(args.matrix))
    elif args.generator is not None:
        g = _matrix(args.generator)
        spec = RotationSpec("generator", g[0] if len(g) == 1 else g)
    elif args.random:
        spec = RotationSpec("random", True)
    elif "rotation" in base:
        spec = _spec_from_config(base["rotation"])
    kw["rotation"] = spec
    p = getattr(args, "p", None)
    p = _numbers(p) if p is not None else base.get("p")
    if p is not None:
        if len(p) != 4:
            raise InputError("--p takes four numbers")
        kw["p"] = tuple(p)
    if spec is not None and spec.kind == "euler" and "d" not in kw:
        kw["d"] = 2
    return RunConfig(**kw)


# -- commands -------------------------------------------------------------------


def _family_table(cfg: RunConfig, R, fam: KrawtchoukFamily, notes) -> Table:
    table = Table(cfg.family, cfg.d, cfg.N, R, __version__, notes=list(notes))
    basis = fam.basis
    for r, deg in enumerate(basis):
        for c, var in enumerate(basis):
            table.rows.append(TableRow(tuple(deg), tuple(var), float(fam.values[r, c]), fam.route))
    return table


def _P_family(cfg, R, rep, notes):
    route = cfg.route
    if route in ("generating", "hypergeometric"):
        return multivariate.Q_to_P_d(_Q_family(cfg, R, rep, notes))
    if route == "auto":
        try:
            return multivariate.build_P_d(R, cfg.N, route="raising")
        except KrawpolyError as exc:
            notes.append(f"raising route unavailable ({exc}); using the oracle route")
            try:
                return multivariate.build_P_oracle_d(rep=rep)
            except InconsistencyError as exc2:
                notes.append(f"P factorization fails ({exc2}); matrix elements <i|U|m> emitted instead")
                return KrawtchoukFamily(R, cfg.N, "P", "matrix-element", rep.U.T.copy())
    if route == "raising":
        return multivariate.build_P_d(R, cfg.N, route="raising")
    return multivariate.build_P_oracle_d(rep=rep)


def _Q_family(cfg, R, rep, notes):
    route = "generating" if cfg.route == "auto" else cfg.route
    if route == "generating":
        return multivariate.Q_via_generating_d(R, cfg.N)
    if route == "hypergeometric":
        return multivariate.Q_via_hypergeometric_d(R, cfg.N)
    sub = RunConfig(**{**cfg.__dict__, "route": route})
    return multivariate.P_to_Q_d(_P_family(sub, R, rep, notes))


def cmd_table(cfg: RunConfig) -> tuple[str, int]:
    R, rep = cfg.rotation_and_rep()
    notes: list[str] = [f"rotation spec {cfg.rotation.describe()}" + (" (degrees)" if cfg.degrees else "")]
    if cfg.family == "W":
        table = Table("W", cfg.d, cfg.N, R, __version__, notes=notes)
        W = multivariate.amplitude_d_vector(R, cfg.N)
        for var, w in zip(enumerate_basis(cfg.d, cfg.N), W):
            table.rows.append(TableRow(None, tuple(var), float(w), "closed-form"))
    elif cfg.family == "P":
        table = _family_table(cfg, R, _P_family(cfg, R, rep, notes), notes)
    elif cfg.family == "Q":
        table = _family_table(cfg, R, _Q_family(cfg, R, rep, notes), notes)
    else:
        if cfg.d != 2:
            raise InputError("the Tratnik family is bivariate")
        if abs(R[0, 1]) > 1e-10:
            raise InputError(f"the Tratnik family needs R12 = 0 (got R12 = {R[0, 1]:.3g}); use --plane yz:A,xz:B")
        prm = tratnik.TratnikParams(R[0, 2] ** 2, R[1, 2] ** 2, cfg.N)
        notes.append(f"p1={format_float(prm.p1)} p2={format_float(prm.p2)}")
        vals = tratnik.tratnik_table(prm)
        table = _family_table(cfg, R, KrawtchoukFamily(R, cfg.N, "Q", "tratnik", vals), notes)
    text = table.to_csv() if cfg.format == "csv" else table.to_json()
    return text, EXIT_OK


def cmd_validate(cfg: RunConfig) -> tuple[str, int]:
    unknown = set(cfg.tolerances) - set(DEFAULT_TOLERANCES)
    if unknown:
        raise InputError(f"unknown tolerance names: {', '.join(sorted(unknown))}")
    R, rep = cfg.rotation_and_rep()
    report = run_suite(rep=rep, N=cfg.N, seed=cfg.seed, tolerances=cfg.tolerances, corrupt=cfg.corrupt)
    if cfg.format == "json":
        obj = report.to_dict()
        obj["version"] = __version__
        obj["rotation"] = R.tolist()
        text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        buf.write(f"# krawpoly {__version__}\n# d={cfg.d} N={cfg.N} seed={cfg.seed}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["check", "residual", "tolerance", "status", "detail"])
        for c in report.checks:
            status = "skip" if c.skipped else ("pass" if c.passed else "FAIL")
            res = "" if c.residual is None else format_float(c.residual)
            w.writerow([c.name, res, format_float(c.tolerance), status, c.detail])
        text = buf.getvalue()
    return text, EXIT_OK if report.passed else EXIT_FAIL


def _try(out: dict, diagnostics: list, key: str, fn):
    try:
        out[key] = fn()
    except SingularParametrizationError as exc:
        diagnostics.append(str(exc))
        out[key] = None


def cmd_params(cfg: RunConfig) -> tuple[str, int]:
    out: dict = {"version": __version__}
    diagnostics: list[str] = []
    status = EXIT_OK
    if cfg.p is not None:
        p = params.PQuadruple(*cfg.p)
        out["p"] = list(cfg.p)
        _try(out, diagnostics, "u", lambda: list(params.u_from_p(p).as_tuple()))
        _try(out, diagnostics, "eta", lambda: params.eta_from_p(p).__dict__)
    else:
        if cfg.d != 2:
            raise InputError("parameter conversions are bivariate (d = 2)")
        R, _ = cfg.rotation.resolve(cfg.d, cfg.degrees, cfg.seed)
        out["R"] = R.tolist()
        _try(out, diagnostics, "u", lambda: list(params.u_from_R(R).as_tuple()))
        _try(out, diagnostics, "p", lambda: list(params.p_from_R(R).as_tuple()))
        out["eta"] = params.eta_from_R(R).__dict__
        if out["u"] is not None:
            t = params.V_from_SUS(R)
            out["V"] = t.V.tolist()
        if out["p"] is not None:
            cyc = params.conversion_cycle(R)
            tol = cfg.tolerances.get("parameter_cycle", DEFAULT_TOLERANCES["parameter_cycle"])
            out["cycle"] = {"defects": cyc, "tolerance": tol, "passed": max(cyc.values()) <= tol}
            if not out["cycle"]["passed"]:
                status = EXIT_FAIL
    out["diagnostics"] = diagnostics
    return json.dumps(out, indent=2, sort_keys=True) + "\n", status


def cmd_oracle(cfg: RunConfig) -> tuple[str, int]:
    R, rep = cfg.rotation_and_rep()
    tol = cfg.tolerances.get("factorization", DEFAULT_TOLERANCES["factorization"])
    comparisons: dict = {}
    W = multivariate.amplitude_d_vector(R, cfg.N)
    builders = {
        "raising": lambda: multivariate.build_P_d(R, cfg.N, route="raising"),
        "generating": lambda: multivariate.Q_to_P_d(multivariate.Q_via_generating_d(R, cfg.N)),
        "hypergeometric": lambda: multivariate.Q_to_P_d(multivariate.Q_via_hypergeometric_d(R, cfg.N)),
    }
    for name, build in builders.items():
        try:
            P = build()
        except KrawpolyError as exc:
            comparisons[name] = {"residual": None, "detail": str(exc)}
            continue
        res = float(np.max(np.abs(rep.U - W[:, None] * P.values.T)))
        comparisons[name] = {"residual": res, "passed": res <= tol}
    failed = any(c.get("passed") is False for c in comparisons.values())
    basis = rep.basis
    if cfg.format == "json":
        obj = {
            "version": __version__,
            "d": cfg.d,
            "N": cfg.N,
            "rotation": R.tolist(),
            "basis": [list(s) for s in basis],
            "U": rep.U.tolist(),
            "comparisons": comparisons,
            "tolerance": tol,
        }
        text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    else:
        lines = [f"# krawpoly {__version__}", f"# d={cfg.d} N={cfg.N}"]
        lines.append("# rotation=" + ";".join(",".join(format_float(x) for x in row) for row in R))
        for name, c in comparisons.items():
            res = "n/a" if c["residual"] is None else format_float(c["residual"])
            lines.append(f"# compare route={name} residual={res}")
        cols = [f"x{j + 1}" for j in range(cfg.d)] + [f"y{j + 1}" for j in range(cfg.d)] + ["value"]
        lines.append(",".join(cols))
        for r, x in enumerate(basis):
            for c, y in enumerate(basis):
                lines.append(",".join(map(str, (*x, *y))) + "," + format_float(rep.U[r, c]))
        text = "\n".join(lines) + "\n"
    return text, EXIT_FAIL if failed else EXIT_OK


HANDLERS = {"table": cmd_table, "validate": cmd_validate, "params": cmd_params, "oracle": cmd_oracle}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        text, status = HANDLERS[cfg.command](cfg)
    except InputError as exc:
        print(f"krawpoly: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except KrawpolyError as exc:
        print(f"krawpoly: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
