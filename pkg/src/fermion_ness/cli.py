"""Command-line entry point: point, sweep, critical and validate subcommands.

Exit codes: 0 success, 1 usage or configuration error, 2 a physics check failed.
"""

import argparse
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import __version__
from .analysis import critical_values
from .model import Kind, ReservoirSpec, SystemParams
from .pipeline import evaluate
from .redfield import ROUTES, VARIANTS, expansion_parameter
from .states import POSITIVITY_TOL

PARAM_NAMES = ("omega1", "omega2", "delta", "gamma1", "gamma2", "t1", "t2", "mu1", "mu2")
DEFAULTS = dict(kind="fermionic", omega1=1.0, omega2=1.0, delta=0.3, gamma1=0.05,
                gamma2=0.05, t1=0.2, t2=None, mu1=0.0, mu2=None, route="nullspace",
                variant="corrected")
AXES = PARAM_NAMES + ("delta_t", "delta_mu", "bias_t")
OUTPUT_COLUMNS = ("rho11", "rho22", "rho33", "rho44", "re_rho23", "im_rho23",
                  "qmi", "cc", "qd", "concurrence", "s1", "s2", "j1", "j2",
                  "min_eig", "residual", "oracle_gap")
COLUMNS = ("kind",) + PARAM_NAMES + OUTPUT_COLUMNS


class UsageError(Exception):
    pass


class PhysicsFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def fmt(x):
    """12 significant digits; scientific notation below 1e-4 in magnitude."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    x = float(x)
    if not math.isfinite(x):
        return repr(x)
    if x == 0:
        return "0"
    if abs(x) < 1e-4:
        return f"{x:.11e}"
    return f"{x:.12g}"


# -- configuration -----------------------------------------------------------

def read_config(path):
    """``key = value`` lines (``=`` optional); blank lines and ``#`` comments ignored."""
    out = {}
    try:
        text = open(path).read()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}")
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            key, _, value = line.partition(" ")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if not key or not value:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        out[key] = value
    return out


def _apply_config(parser, config):
    known = {a.dest: a for a in parser._actions}
    converted = {}
    for key, value in config.items():
        if key not in known or key in ("help", "config"):
            raise UsageError(f"unknown config key {key!r}")
        action = known[key]
        if action.nargs == 0:
            converted[key] = value.lower() in ("1", "true", "yes", "on")
            continue
        try:
            converted[key] = action.type(value) if action.type else value
        except (TypeError, ValueError):
            raise UsageError(f"bad value for {key}: {value!r}")
        if action.choices and converted[key] not in action.choices:
            raise UsageError(f"{key} must be one of {', '.join(action.choices)}")
    parser.set_defaults(**converted)


def _add_physics(p):
    p.add_argument("--kind", choices=[k.value for k in Kind])
    for name in PARAM_NAMES:
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--route", choices=ROUTES)
    p.add_argument("--variant", choices=VARIANTS)
    p.add_argument("--oracle-cc", action="store_true",
                   help="attach the brute-force classical correlation")


def build_parser():
    parser = _Parser(prog="fermion-ness",
                     description="Steady states and correlations of two coupled fermion sites.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("point", help="evaluate one parameter point")
    _add_physics(p)
    p.add_argument("--check-positivity", action="store_true",
                   help="exit with status 2 if the steady state is not positive")
    p.add_argument("--config")

    p = sub.add_parser("sweep", help="evaluate a one- or two-axis grid and write CSV")
    _add_physics(p)
    p.add_argument("--axis1", required=True, metavar="NAME:START:STOP:COUNT")
    p.add_argument("--axis2", metavar="NAME:START:STOP:COUNT")
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--config")

    p = sub.add_parser("critical", help="critical temperature, chemical potential and tunneling")
    p.add_argument("--omega1", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--gamma1", type=float)
    p.add_argument("--t1", type=float)
    p.add_argument("--config")

    p = sub.add_parser("validate", help="run the randomized cross-check suites")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--config")
    return parser


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        sub = parser._subparsers._group_actions[0].choices[args.command]
        _apply_config(sub, read_config(args.config))
        args = parser.parse_args(argv)
    for key, value in DEFAULTS.items():
        if getattr(args, key, "absent") is None:
            setattr(args, key, value)
    return args


def physics_from_args(args):
    kind = Kind(args.kind)
    t2 = args.t1 if args.t2 is None else args.t2
    mu2 = args.mu1 if args.mu2 is None else args.mu2
    if kind is Kind.BOSONIC and (args.mu1 != 0 or mu2 != 0):
        raise UsageError("bosonic reservoirs need mu1 = mu2 = 0")
    try:
        params = SystemParams(args.omega1, args.omega2, args.delta, args.gamma1, args.gamma2)
        r1 = ReservoirSpec(kind, args.t1, args.mu1)
        r2 = ReservoirSpec(kind, t2, mu2)
    except ValueError as exc:
        raise UsageError(str(exc))
    return params, r1, r2


def check_route(params, route):
    if route in ("closed", "leading") and not params.is_symmetric:
        raise UsageError(f"route {route!r} needs omega1 == omega2 and gamma1 == gamma2")
    if route == "leading" and abs(expansion_parameter(params)) >= 1:
        raise UsageError("route 'leading' needs |gamma/(2 delta)| < 1")


# -- point -------------------------------------------------------------------

def _point_record(res, kind):
    p, r1, r2 = res.params, res.r1, res.r2
    rec = {"kind": kind.value, "omega1": p.omega1, "omega2": p.omega2, "delta": p.delta,
           "gamma1": p.gamma1, "gamma2": p.gamma2, "t1": r1.temperature,
           "t2": r2.temperature, "mu1": r1.mu, "mu2": r2.mu, "route": res.route}
    for prefix, st in (("energy", res.energy), ("local", res.local)):
        for i, v in enumerate(st.populations, 1):
            rec[f"{prefix}_rho{i}{i}"] = v
        rec[f"{prefix}_re_rho23"] = st.rho23.real
        rec[f"{prefix}_im_rho23"] = st.rho23.imag
    c = res.correlations
    rec.update(concurrence=c.concurrence, qmi=c.qmi, cc=c.cc, qd=c.qd, s1=c.s1, s2=c.s2,
               branch=c.branch, cc_oracle=c.cc_oracle, oracle_gap=c.oracle_gap,
               j1=res.currents.j1, j2=res.currents.j2,
               n_site1=res.site_populations[0], n_site2=res.site_populations[1],
               min_eig=res.min_eigenvalue, residual=res.residual, positive=res.positive)
    return rec


def render_record(rec):
    lines = []
    for key, value in rec.items():
        if value is None:
            text = "null"
        elif isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, str):
            text = json.dumps(value)
        else:
            text = fmt(value)
        lines.append(f"  {json.dumps(key)}: {text}")
    return "{\n" + ",\n".join(lines) + "\n}\n"


def _evaluate(params, r1, r2, route, oracle, variant):
    try:
        return evaluate(params, r1, r2, route, oracle, variant)
    except np.linalg.LinAlgError as exc:
        raise PhysicsFailure(str(exc))


def cmd_point(args, out):
    params, r1, r2 = physics_from_args(args)
    check_route(params, args.route)
    res = _evaluate(params, r1, r2, args.route, args.oracle_cc, args.variant)
    out.write(render_record(_point_record(res, r1.kind)))
    if args.check_positivity and not res.positive:
        raise PhysicsFailure(f"steady state is not positive (min eigenvalue {res.min_eigenvalue:.6g} "
                             f"< -{POSITIVITY_TOL:g})")
    return 0


# -- sweep -------------------------------------------------------------------

def parse_axis(text):
    parts = text.split(":")
    if len(parts) != 4:
        raise UsageError(f"axis {text!r} must look like NAME:START:STOP:COUNT")
    name = parts[0]
    if name not in AXES:
        raise UsageError(f"unknown axis {name!r}; choose from {', '.join(AXES)}")
    try:
        start, stop, count = float(parts[1]), float(parts[2]), int(parts[3])
    except ValueError:
        raise UsageError(f"axis {text!r}: bad number")
    if not (math.isfinite(start) and math.isfinite(stop)):
        raise UsageError(f"axis {name}: grid must be finite")
    if count < 1:
        raise UsageError(f"axis {name}: count must be at least 1")
    return name, np.linspace(start, stop, count)


def _apply_axis(values, name, x):
    """Set one axis value in a dict of the nine inputs."""
    if name == "delta_t":
        values["t2"] = values["t1"] + x
    elif name == "delta_mu":
        values["mu2"] = values["mu1"] + x
    elif name == "bias_t":
        # symmetric split around the midpoint of the configured t1, t2
        mid = 0.5 * (values["t1_base"] + values["t2_base"])
        values["t1"], values["t2"] = mid - x, mid + x
    else:
        values[name] = x


def _sweep_point(task):
    kind, values, route, oracle, variant = task
    try:
        params = SystemParams(*(values[k] for k in PARAM_NAMES[:5]))
        r1 = ReservoirSpec(kind, values["t1"], values["mu1"])
        r2 = ReservoirSpec(kind, values["t2"], values["mu2"])
    except ValueError as exc:
        return None, f"invalid point: {exc}"
    try:
        res = evaluate(params, r1, r2, route, oracle, variant)
    except np.linalg.LinAlgError as exc:
        return None, str(exc)
    loc = res.local
    c = res.correlations
    row = (*loc.populations, loc.rho23.real, loc.rho23.imag, c.qmi, c.cc, c.qd, c.concurrence,
           c.s1, c.s2, res.currents.j1, res.currents.j2, res.min_eigenvalue, res.residual,
           c.oracle_gap)
    return row, None


def cmd_sweep(args, out):
    params, r1, r2 = physics_from_args(args)
    kind = r1.kind
    axes = [parse_axis(args.axis1)]
    if args.axis2:
        axes.append(parse_axis(args.axis2))
        if axes[0][0] == axes[1][0]:
            raise UsageError("axis1 and axis2 must differ")
    names = {a[0] for a in axes}
    if kind is Kind.BOSONIC and names & {"mu1", "mu2", "delta_mu"}:
        raise UsageError("bosonic reservoirs have no chemical potential axis")
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    base = {k: getattr(params, k) for k in PARAM_NAMES[:5]}
    base.update(t1=r1.temperature, t2=r2.temperature, mu1=r1.mu, mu2=r2.mu,
                t1_base=r1.temperature, t2_base=r2.temperature)
    # an unset t2 or mu2 tracks its partner, so sweeping t1 alone stays in equilibrium
    t2_follows = args.t2 is None and not names & {"t2", "delta_t", "bias_t"}
    mu2_follows = args.mu2 is None and not names & {"mu2", "delta_mu"}
    tasks = []
    grids = [a[1] for a in axes]
    for idx in np.ndindex(*(len(g) for g in grids)):
        values = dict(base)
        for (name, grid), i in zip(axes, idx):
            _apply_axis(values, name, float(grid[i]))
        if t2_follows:
            values["t2"] = values["t1"]
        if mu2_follows:
            values["mu2"] = values["mu1"]
        tasks.append(values)
    # route preconditions are checked on every point before any solve
    for values in tasks:
        try:
            point = SystemParams(*(values[k] for k in PARAM_NAMES[:5]))
        except ValueError as exc:
            raise UsageError(f"invalid grid point: {exc}")
        check_route(point, args.route)
    work = [(kind.value, v, args.route, args.oracle_cc, args.variant) for v in tasks]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_point, work, chunksize=8))
    else:
        results = [_sweep_point(w) for w in work]

    buf = io.StringIO()
    meta = " ".join([f"kind={kind.value}"]
                    + [f"{k}={fmt(base[k])}" for k in PARAM_NAMES]
                    + [f"route={args.route}", f"variant={args.variant}",
                       f"oracle_cc={'true' if args.oracle_cc else 'false'}",
                       f"axis1={args.axis1}"]
                    + ([f"axis2={args.axis2}"] if args.axis2 else []))
    buf.write(f"# fermion-ness {__version__} sweep {meta}\n")
    buf.write(",".join(COLUMNS) + "\n")
    failures = []
    for values, (row, err) in zip(tasks, results):
        cells = [kind.value] + [fmt(values[k]) for k in PARAM_NAMES]
        if row is None:
            failures.append(err)
            cells += [""] * len(OUTPUT_COLUMNS)
        else:
            cells += [fmt(x) for x in row]
        buf.write(",".join(cells) + "\n")
    text = buf.getvalue()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    if failures:
        raise PhysicsFailure(f"{len(failures)} grid point(s) failed; first: {failures[0]}")
    return 0


# -- critical and validate ----------------------------------------------------

def cmd_critical(args, out):
    omega = 1.0 if args.omega1 is None else args.omega1
    delta = 0.3 if args.delta is None else args.delta
    gamma = 0.05 if args.gamma1 is None else args.gamma1
    t1 = 0.2 if args.t1 is None else args.t1
    if t1 <= 0:
        raise UsageError("t1 must be positive")
    try:
        cv = critical_values(delta, gamma, omega, t1)
    except ValueError as exc:
        raise UsageError(str(exc))
    rec = {"omega": omega, "delta": delta, "gamma": gamma, "t1": t1,
           "t_critical": cv.t_critical,
           "mu_star": cv.mu_star if cv.mu_star is not None else "undefined above critical temperature",
           "mu_star_min": cv.mu_star_min, "delta_star": cv.delta_star}
    out.write(render_record(rec))
    return 0


def cmd_validate(args, out):
    from .validation import run_all

    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    results = run_all(args.seed, args.samples)
    out.write(f"# fermion-ness {__version__} validate seed={args.seed} samples={args.samples}\n")
    for r in results:
        out.write(r.line() + "\n")
    ok = all(r.passed for r in results)
    out.write(f"overall {'PASS' if ok else 'FAIL'}\n")
    return 0 if ok else 2


COMMANDS = {"point": cmd_point, "sweep": cmd_sweep, "critical": cmd_critical,
            "validate": cmd_validate}


def main(argv=None, out=None):
    out = out or sys.stdout
    try:
        args = parse_args(sys.argv[1:] if argv is None else argv)
        return COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"fermion-ness: error: {exc}", file=sys.stderr)
        return 1
    except PhysicsFailure as exc:
        print(f"fermion-ness: check failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
