"""Command-line front end.

Verbs
-----
``hyperbolic``
    Hyperboloid propagator tables: spectral integral against closed forms.
``oscillator radial|full|spectrum|green``
    Oscillator kernels, energies and Green functions.
``check <name>``
    Identity and consistency checks, reported as JSON.
``converge``
    Time-slicing convergence tables.

Exit status is 0 on success, 1 when a numerical tolerance is missed and 2 on
usage or domain errors.  Tables are CSV (17 significant digits) or JSON
(sorted keys).  ``--config FILE`` reads ``key = value`` lines that act as
defaults; explicit flags win.
"""

import argparse
import csv
import io
import itertools
import json
import math
import sys

import numpy as np

from . import hyperbolic as hyp
from . import oscillator as osc
from . import slicer, su11
from .errors import ConvergenceError, DomainError
from .zonal import GroupDescriptor, orthogonality_residual

__all__ = ["main", "COLUMNS", "CHECKS"]

EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE = 0, 1, 2

# Every numeric column the CLI emits, with the formula it implements.
COLUMNS = {
    "theta": "geodesic angle Theta between the two points",
    "beta": "Euclidean time (inverse energy)",
    "tau": "real time",
    "spectral_integral": "hyperboloid heat kernel as a Plancherel integral over the principal series",
    "closed_form": "hyperboloid heat kernel from the derivative-tower closed form (odd or even d)",
    "closed_form_real": "real part of the real-time hyperboloid closed form",
    "closed_form_imag": "imaginary part of the real-time hyperboloid closed form",
    "abs_diff": "absolute difference between the two preceding kernel columns",
    "r_final": "final radius r''",
    "r_initial": "initial radius r'",
    "radial_kernel": "oscillator radial kernel 2 alpha (r'r'')^(-(d-2)/2) v(alpha r''^2, alpha r'^2)",
    "radial_kernel_real": "real part of the real-time oscillator radial kernel",
    "radial_kernel_imag": "imaginary part of the real-time oscillator radial kernel",
    "image_method_oracle": "d=3, l=0 radial kernel from 1-d Mehler kernels by the image method",
    "rel_diff": "relative difference between kernel and oracle",
    "full_kernel": "oscillator propagator summed over partial waves up to L_max",
    "truncation_error": "magnitude of the last partial wave kept",
    "mehler_product": "product of one-dimensional Mehler kernels",
    "n": "principal quantum number",
    "energy": "oscillator level hbar omega (n + d/2)",
    "E": "energy argument of the Green function",
    "green_laplace": "radial Green function as the Laplace transform of the radial kernel",
    "green_whittaker": "radial Green function in Whittaker-function form",
    "N": "number of time slices",
    "max_error": "largest deviation of the N-fold product from the exact result",
    "rate": "empirical convergence order log(e_prev/e_N)/log(N/N_prev)",
}


# ---------------------------------------------------------------------------
# parsing helpers
# ---------------------------------------------------------------------------

def parse_range(text):
    """``a:b:h`` (inclusive), ``a..b`` (integers) or a comma list."""
    text = str(text).strip()
    if ".." in text:
        a, b = text.split("..")
        return [float(k) for k in range(int(a), int(b) + 1)]
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3 or parts[2] <= 0 or parts[1] < parts[0]:
            raise DomainError(f"bad range {text!r}; expected start:stop:step")
        a, b, h = parts
        n = int(math.floor((b - a) / h + 1e-9))
        return [a + k * h for k in range(n + 1)]
    return [float(p) for p in text.split(",") if p.strip()]


def parse_ints(text):
    vals = []
    for v in parse_range(text):
        if v != int(v):
            raise DomainError(f"expected integers, got {text!r}")
        vals.append(int(v))
    return vals


def parse_vector(text):
    return np.array([float(p) for p in str(text).split(",")])


def read_config(path):
    """Flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key = value")
            k, v = (s.strip() for s in line.split("=", 1))
            out[k.replace("-", "_")] = v
    return out


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "" if math.isnan(v) else format(float(v), ".17g")
    return str(v)


def render_table(header, rows, fmt):
    if fmt == "json":
        recs = [dict(zip(header, (_jsonable(v) for v in r))) for r in rows]
        return json.dumps(recs, sort_keys=True, indent=1, ensure_ascii=False) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _jsonable(v):
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return None if math.isnan(v) else float(format(v, ".17g"))
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.bool_):
        return bool(v)
    return v


def emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------

def _time_mode(args):
    if args.tau is not None:
        return "real-time", float(args.tau)
    return "euclidean", float(args.beta if args.beta is not None else 1.0)


def cmd_hyperbolic(args):
    mode, t = _time_mode(args)
    model = hyp.HyperbolicModel(args.d, R=args.R, M=args.M, hbar=args.hbar, mode=mode)
    method = args.method
    if method == "odd" and args.d % 2 == 0:
        raise hyp.ParityError("method 'odd' needs odd d")
    if method == "even" and args.d % 2:
        raise hyp.ParityError("method 'even' needs even d")
    thetas = parse_range(args.theta)
    tcol = "beta" if mode == "euclidean" else "tau"
    rows = []
    if mode == "real-time":
        if method in ("spectral", "both"):
            raise hyp.UnsupportedModeError("real-time output uses the closed forms only; choose --method closed|odd|even")
        for th in thetas:
            v = complex(hyp.closed_form(th, t, model))
            rows.append((th, t, v.real, v.imag))
        emit(render_table(["theta", tcol, "closed_form_real", "closed_form_imag"], rows, args.format), args.out)
        return EXIT_OK
    want_spec = method in ("spectral", "both")
    want_closed = method in ("closed", "odd", "even", "both")
    closed = hyp.closed_form(np.array(thetas), t, model) if want_closed else None
    worst = 0.0
    for i, th in enumerate(thetas):
        row = [th, t]
        if want_spec:
            row.append(float(hyp.spectral_propagator(th, t, model)))
        if want_closed:
            row.append(float(closed[i]))
        if want_spec and want_closed:
            diff = abs(row[2] - row[3])
            worst = max(worst, diff)
            row.append(diff)
        rows.append(row)
    header = ["theta", tcol] + (["spectral_integral"] if want_spec else []) + (["closed_form"] if want_closed else [])
    if want_spec and want_closed:
        header.append("abs_diff")
    emit(render_table(header, rows, args.format), args.out)
    tol = args.tol if args.tol is not None else (1e-6 if args.d % 2 else 1e-4)
    return EXIT_TOLERANCE if worst > tol else EXIT_OK


def cmd_oscillator(args):
    mode, t = _time_mode(args)
    model = osc.OscillatorModel(args.d, M=args.M, omega=args.omega, hbar=args.hbar, mode=mode)
    what = args.what
    if what == "spectrum":
        ns = parse_ints(args.n if args.n is not None else "0..5")
        rows = [(n, osc.spectrum(n, model)) for n in ns]
        emit(render_table(["n", "energy"], rows, args.format), args.out)
        return EXIT_OK
    ch = osc.ChannelLabel(args.l, args.d)
    if what == "radial":
        radii = parse_range(args.grid if args.grid is not None else "0.4:2:0.4")
        tcol = "beta" if mode == "euclidean" else "tau"
        oracle = mode == "euclidean" and args.d == 3 and args.l == 0
        rows, worst = [], 0.0
        for r2, r1 in itertools.product(radii, radii):
            v = osc.radial_propagator(ch, r2, r1, t, model)
            if mode != "euclidean":
                v = complex(v)
                rows.append((r2, r1, t, v.real, v.imag))
                continue
            row = [r2, r1, t, float(v)]
            if oracle:
                o = float(osc.image_method_kernel(r2, r1, t, model))
                rel = abs(float(v) - o) / abs(o)
                worst = max(worst, rel)
                row += [o, rel]
            rows.append(row)
        if mode == "euclidean":
            header = ["r_final", "r_initial", tcol, "radial_kernel"]
            if oracle:
                header += ["image_method_oracle", "rel_diff"]
        else:
            header = ["r_final", "r_initial", tcol, "radial_kernel_real", "radial_kernel_imag"]
        emit(render_table(header, rows, args.format), args.out)
        tol = args.tol if args.tol is not None else 1e-10
        return EXIT_TOLERANCE if worst > tol else EXIT_OK
    if what == "full":
        if mode != "euclidean":
            raise DomainError("the full propagator is tabulated in Euclidean mode")
        x2 = parse_vector(args.x2) if args.x2 else np.eye(args.d)[0] * 0.6 + np.eye(args.d)[1 % args.d] * 0.8
        x1 = parse_vector(args.x1) if args.x1 else np.eye(args.d)[0]
        res = osc.full_propagator(x2, x1, t, model, L_max=args.L_max)
        mp = float(np.prod(osc.mehler_kernel(x2, x1, t, model.M, model.omega, model.hbar)))
        rel = abs(res.value - mp) / abs(mp)
        emit(render_table(["beta", "full_kernel", "truncation_error", "mehler_product", "rel_diff"],
                          [(t, res.value, res.error, mp, rel)], args.format), args.out)
        tol = args.tol if args.tol is not None else 1e-8
        return EXIT_TOLERANCE if rel > tol else EXIT_OK
    if what == "green":
        if mode != "euclidean":
            raise DomainError("the Green function is computed in Euclidean mode")
        energies = parse_range(args.E if args.E is not None else "-1")
        radii = parse_range(args.grid if args.grid is not None else "0.8,1.2")
        rows, worst = [], 0.0
        for E in energies:
            for r2, r1 in itertools.combinations_with_replacement(radii, 2):
                g = osc.radial_green(ch, r2, r1, E, model)
                w = osc.radial_green_closed_form(ch, r2, r1, E, model)
                rel = abs(g - w) / abs(w)
                worst = max(worst, rel)
                rows.append((E, r2, r1, g, w, rel))
        emit(render_table(["E", "r_final", "r_initial", "green_laplace", "green_whittaker", "rel_diff"],
                          rows, args.format), args.out)
        tol = args.tol if args.tol is not None else 1e-8
        return EXIT_TOLERANCE if worst > tol else EXIT_OK
    raise DomainError(f"unknown oscillator table {what!r}")


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def _rec(name, params, residual, tol):
    residual = float(residual)
    return {"name": name, "parameters": params, "residual": residual, "tolerance": tol,
            "pass": bool(residual < tol)}


def check_weber(args):
    tol = args.tol or 1e-9
    return [_rec("weber", {"lambda": lam, "a": a, "b": b, "beta": beta}, osc.weber_residual(lam, a, b, beta), tol)
            for lam in (0.5, 1.5, 2.5) for a in (0.5, 1.0, 1.5) for b in (0.5, 1.0, 1.5) for beta in (1.0, 2.0)]


def check_vsemigroup(args):
    tol = args.tol or 1e-8
    grid = (0.5, 1.0, 2.0)
    return [_rec("vsemigroup", {"J": J, "eta_final": e2, "eta_initial": e1, "sigma1": s1, "sigma2": s2},
                 osc.v_semigroup_residual(J, e2, e1, s1, s2), tol)
            for J in (-0.75, -1.25, -2.0) for e2 in grid for e1 in grid for s1 in (0.2, 0.5) for s2 in (0.2, 0.5)]


def check_ortho(args):
    tol = args.tol or 1e-12
    desc = GroupDescriptor("sphere", 3)
    L = 10
    return [_rec("ortho", {"space": "S2", "l": l, "l_prime": lp}, orthogonality_residual(l, lp, desc), tol)
            for l in range(L + 1) for lp in range(l, L + 1)]


def check_commutators(args):
    tol = args.tol or 1e-12
    out = []
    for d, n_max in ((1, 8), (2, 8), (3, 5)):
        real = su11.build_realization(d, n_max, args.M, args.omega, args.hbar)
        p = {"d": d, "n_max": n_max}
        out.append(_rec("commutators", dict(p, relation="su11"), su11.commutator_residual(real), tol))
        out.append(_rec("commutators", dict(p, relation="heisenberg"), su11.heisenberg_residual(real), tol))
        out.append(_rec("commutators", dict(p, relation="H=2hw*J3"), su11.hamiltonian_j3_residual(real), tol))
        out.append(_rec("commutators", dict(p, relation="K+=J1+J3"), su11.kplus_residual(real), tol))
    return out


def check_casimir(args):
    tol = args.tol or 1e-11
    out = []
    for d, n_max in ((2, 8), (3, 5)):
        real = su11.build_realization(d, n_max, args.M, args.omega, args.hbar)
        out.append(_rec("casimir", {"d": d, "n_max": n_max, "relation": "J^2=L^2/4+d(d-4)/16"},
                        su11.casimir_relation_residual(real), tol))
    for d in (2, 3, 4, 5):
        for l in range(5):
            v = su11.channel_casimir_eigen(l, d)
            out.append(_rec("casimir", {"d": d, "l": l, "relation": "channel", "value": v.from_l}, v.discrepancy, tol))
    return out


def check_limit47(args):
    tol = args.tol or 1e-3
    N = int(float(args.N)) if args.N else 10000
    out = []
    for rho in (0.5, 1.0):
        for z in (0.5, 1.0):
            val, target = hyp.limit_check(rho, z, N)
            out.append(_rec("limit47", {"rho": rho, "z": z, "N": N, "value": val, "target": target},
                            abs(val - target), tol))
    return out


def check_planewave(args):
    tol = args.tol or 1e-10
    out = []
    for d, t in ((3, tol), (5, tol), (2, max(tol, 1e-8))):
        for z in (0.5, 2.0, -5.0, 5.0, 3j):
            for c in (-1.0, -0.3, 0.4, 1.0):
                out.append(_rec("planewave", {"d": d, "z": str(z), "cos_gamma": c, "L_max": 40},
                                osc.plane_wave_expansion_residual(z, c, 40, d), t))
    return out


def check_semigroup(args):
    out = []
    for d in (2, 3):
        model = hyp.HyperbolicModel(d)
        for th in (0.0, 1.5, 3.0):
            out.append(_rec("semigroup", {"space": "hyperboloid", "d": d, "theta": th, "beta1": 0.5, "beta2": 0.5},
                            hyp.semigroup_residual(th, 0.5, 0.5, model), args.tol or 1e-6))
    model = osc.OscillatorModel(3, M=args.M, omega=args.omega, hbar=args.hbar)
    for l in (0, 1):
        for b1, b2 in ((0.25, 0.25), (0.3, 0.7)):
            out.append(_rec("semigroup", {"space": "oscillator-radial", "d": 3, "l": l, "beta1": b1, "beta2": b2},
                            osc.radial_semigroup_residual(osc.ChannelLabel(l, 3), 1.2, 0.8, b1, b2, model),
                            args.tol or 1e-8))
    return out


CHECKS = {
    "weber": check_weber,
    "vsemigroup": check_vsemigroup,
    "ortho": check_ortho,
    "commutators": check_commutators,
    "casimir": check_casimir,
    "limit47": check_limit47,
    "planewave": check_planewave,
    "semigroup": check_semigroup,
}


def cmd_check(args):
    if args.name not in CHECKS:
        raise DomainError(f"unknown check {args.name!r}; choose from {sorted(CHECKS)}")
    recs = CHECKS[args.name](args)
    emit(json.dumps(recs, sort_keys=True, indent=1, ensure_ascii=False) + "\n", args.out)
    return EXIT_OK if all(r["pass"] for r in recs) else EXIT_TOLERANCE


def cmd_converge(args):
    Ns = parse_ints(args.N if args.N else "16,32,64,128")
    params = {}
    if args.scenario in ("oscillator-l0", "free"):
        params = dict(M=args.M, hbar=args.hbar, beta=args.beta if args.beta is not None else 0.5)
        if args.scenario == "oscillator-l0":
            params["omega"] = args.omega
        if args.grid:
            params["n"] = int(args.grid)
    elif args.beta is not None:
        params["beta"] = args.beta
    table = slicer.convergence_table(slicer.scenario(args.scenario, **params), Ns)
    emit(render_table(["N", "max_error", "rate"], table, args.format), args.out)
    if args.tol is not None and table[-1].max_error > args.tol:
        return EXIT_TOLERANCE
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parser
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _common(p, d_default=3):
    p.add_argument("--d", type=int, default=d_default, help="dimension")
    p.add_argument("--M", type=float, default=1.0, help="mass")
    p.add_argument("--hbar", type=float, default=1.0, help="Planck's constant")
    p.add_argument("--omega", type=float, default=1.0, help="oscillator frequency")
    p.add_argument("--R", type=float, default=1.0, help="curvature radius")
    t = p.add_mutually_exclusive_group()
    t.add_argument("--beta", type=float, default=None, help="Euclidean time")
    t.add_argument("--tau", type=float, default=None, help="real time")
    p.add_argument("--l", type=int, default=0, help="angular momentum channel")
    p.add_argument("--n", default=None, help="quantum numbers, e.g. 0..5")
    p.add_argument("--grid", default=None, help="radii (a:b:h or list), or slicing grid size")
    p.add_argument("--tol", type=float, default=None, help="tolerance overriding the default")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default=None)
    p.add_argument("--config", default=None, help="key = value file of defaults")


def build_parser():
    top = _Parser(prog="zonalprop", description="Propagators on homogeneous spaces by harmonic analysis.")
    sub = top.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    h = sub.add_parser("hyperbolic", help="hyperboloid propagator tables")
    _common(h)
    h.add_argument("--theta", default="0:3:0.5", help="geodesic angles")
    h.add_argument("--method", choices=("spectral", "closed", "odd", "even", "both"), default="both")

    o = sub.add_parser("oscillator", help="oscillator kernels, spectrum and Green function")
    o.add_argument("what", choices=("radial", "full", "spectrum", "green"))
    _common(o)
    o.add_argument("--E", default=None, help="energies for the Green function")
    o.add_argument("--x1", default=None, help="initial point, comma separated")
    o.add_argument("--x2", default=None, help="final point, comma separated")
    o.add_argument("--L-max", dest="L_max", type=int, default=40)

    c = sub.add_parser("check", help="identity checks (JSON report)")
    c.add_argument("name", help="one of: " + ", ".join(CHECKS))
    _common(c)
    c.add_argument("--N", default=None, help="slice count for limit47")

    v = sub.add_parser("converge", help="time-slicing convergence table")
    _common(v)
    v.add_argument("--scenario", choices=sorted(slicer.SCENARIOS), default="oscillator-l0")
    v.add_argument("--N", default=None, help="ascending slice counts, e.g. 16,32,64")
    return top


VERBS = {"hyperbolic": cmd_hyperbolic, "oscillator": cmd_oscillator, "check": cmd_check, "converge": cmd_converge}


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            cfg = read_config(args.config)
            sp = parser._subparsers._group_actions[0].choices[args.verb]
            known = {a.dest for a in sp._actions}
            unknown = set(cfg) - known
            if unknown:
                raise DomainError(f"unknown config keys: {sorted(unknown)}")
            typed = {}
            for a in sp._actions:
                if a.dest in cfg:
                    typed[a.dest] = a.type(cfg[a.dest]) if a.type else cfg[a.dest]
            sp.set_defaults(**typed)
            args = parser.parse_args(argv)
        if args.format is None:
            args.format = "csv"
        return VERBS[args.verb](args)
    except _UsageError as exc:
        print(f"zonalprop: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, OSError) as exc:
        print(f"zonalprop: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"zonalprop: error: {exc} (estimate {exc.estimate:.3g})", file=sys.stderr)
        return EXIT_TOLERANCE


if __name__ == "__main__":
    sys.exit(main())
