"""Command-line interface: every library operation behind one executable.

Output is machine-readable JSON by default (stable key order, so identical
configurations produce byte-identical output once `--no-meta` strips the
timing block).  Exit codes: 0 success, 1 usage error, 2 domain error,
3 tolerance failure on a check subcommand.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import acceptance, character, equivariant, groups, hyperbolic, lie, reps
from .errors import DomainError, NumericError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_TOLERANCE = 3

SUBCOMMANDS = (
    "iwasawa", "cartan", "psi", "psi-inv", "bracket", "exp", "casimir",
    "spherical", "eigencheck", "matcoef", "ktypes", "ladder", "separate",
    "gram", "haarcheck", "charcheck", "suite",
)

# Where each library operation is exposed; the coverage test keeps this
# honest against the package-level operation registry.
OPERATION_COVERAGE = {
    "iwasawa": ("iwasawa", "recompose", "make_a", "make_n", "make_k"),
    "cartan": ("cartan", "cartan_radius"),
    "psi": ("psi",),
    "psi-inv": ("psi_inv", "so21_check"),
    "bracket": ("bracket", "ad_w_eigencheck"),
    "exp": ("exp_matrix", "dpsi"),
    "casimir": ("casimir_apply",),
    "spherical": ("phi", "chi", "act"),
    "eigencheck": ("eigencheck", "laplacian_fd"),
    "matcoef": ("matcoef", "act_principal", "cocycle"),
    "ktypes": ("k_types", "tau_spherical_set", "tau"),
    "ladder": ("discrete_ladder_leakage",),
    "separate": ("separation_witness", "project_biequivariant", "right_isotype_project"),
    "gram": ("gram_min_eig",),
    "haarcheck": ("haar_density", "integrate_G", "haar_invariance_check"),
    "charcheck": ("char_identity_check", "corollary_check", "pi_of_f"),
    "suite": ("run",),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run's output."""

    subcommand: str
    format: str
    seed: int
    threads: int
    no_meta: bool
    out: str | None


def _parse_floats(text, count=None):
    parts = [p for p in text.replace("[", "").replace("]", "").split(",") if p.strip()]
    try:
        values = [float(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"cannot parse {text!r} as numbers") from exc
    if count is not None and len(values) != count:
        raise UsageError(f"expected {count} comma-separated numbers, got {len(values)}")
    return values


def _parse_matrix3(text):
    return np.array(_parse_floats(text, 9)).reshape(3, 3)


def _parse_matrix2(text):
    return np.array(_parse_floats(text, 4)).reshape(2, 2)


def _element_from_args(args):
    if getattr(args, "matrix", None):
        return _parse_matrix3(args.matrix)
    if getattr(args, "g_iwasawa", None):
        t, u, theta = _parse_floats(args.g_iwasawa, 3)
        return groups.recompose(groups.IwasawaCoords(t, u, theta))
    raise UsageError("provide --matrix or --g-iwasawa")


def _jsonable(value):
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, np.ndarray):
        if np.iscomplexobj(value):
            return [_jsonable(complex(v)) for v in value.ravel()]
        return [float(v) for v in value.ravel()]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _emit(payload, config: RunConfig, started: float) -> None:
    if not config.no_meta:
        payload = dict(payload)
        payload["meta"] = {
            "subcommand": config.subcommand,
            "runtime_seconds": time.perf_counter() - started,
            "timestamp": time.time(),
        }
    if config.format == "json":
        text = json.dumps(_jsonable(payload), sort_keys=True)
    elif config.format == "csv":
        rows = payload.get("rows")
        if rows is None:
            raise UsageError("csv output is only available for 1-D sweeps")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(payload["columns"])
        writer.writerows(rows)
        text = buf.getvalue().rstrip("\n")
    else:
        text = "\n".join(f"{k}: {v}" for k, v in _jsonable(payload).items())
    if config.out:
        with open(config.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _common_flags(parser):
    parser.add_argument("--format", choices=("json", "csv", "text"), default="json")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--no-meta", action="store_true")
    parser.add_argument("--out", default=None)


def build_parser() -> _Parser:
    parser = _Parser(prog="so21", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("iwasawa", help="decompose g = a_t n_u k_theta, or rebuild from coordinates")
    p.add_argument("--matrix")
    p.add_argument("--recompose", help="t,u,theta to rebuild instead of decompose")
    _common_flags(p)

    p = sub.add_parser("cartan", help="polar coordinates k_theta1 a_t k_theta2 and the radius")
    p.add_argument("--matrix", required=True)
    _common_flags(p)

    p = sub.add_parser("psi", help="apply the covering map to an SL(2,R) matrix")
    p.add_argument("--sl2", required=True, help="a,b,c,d")
    _common_flags(p)

    p = sub.add_parser("psi-inv", help="canonical SL(2,R) representative of a group element")
    p.add_argument("--matrix", required=True)
    _common_flags(p)

    p = sub.add_parser("bracket", help="commutator of algebra elements; --adw-check for the eigenvector defects")
    p.add_argument("--x", help="9 numbers or a basis name (V1, V2, W)")
    p.add_argument("--y", help="9 numbers or a basis name")
    p.add_argument("--adw-check", action="store_true")
    _common_flags(p)

    p = sub.add_parser("exp", help="matrix exponential; --dpsi for the differential of the covering map")
    p.add_argument("--algebra", help="9 numbers or a basis name")
    p.add_argument("--dpsi", help="a,b,c,d of a traceless 2x2 matrix")
    _common_flags(p)

    p = sub.add_parser("casimir", help="Casimir ratio on a diagonal matrix coefficient")
    p.add_argument("--s", required=True, help="spectral parameter, e.g. i, 2i, 0.5")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--g-iwasawa", default="0.4,0.2,0.3")
    p.add_argument("--h", type=float, default=1e-3)
    _common_flags(p)

    p = sub.add_parser("spherical", help="evaluate phi_w; --ray sweeps a geodesic (csv-able)")
    p.add_argument("--w", required=True, help="complex exponent, e.g. 0.5+3i")
    p.add_argument("--z", help="x,y with y > 0")
    p.add_argument("--nodes", type=int, default=None)
    p.add_argument("--ray", help="t0,t1,steps: sweep phi_w(a_t . i)")
    p.add_argument("--act", help="t,u,theta: also report the moved point g . z")
    _common_flags(p)

    p = sub.add_parser("eigencheck", help="Laplacian eigenvalue residual of phi_w")
    p.add_argument("--w", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--h", type=float, default=1e-3)
    p.add_argument("--nodes", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-4)
    _common_flags(p)

    p = sub.add_parser("matcoef", help="matrix coefficient <rho(g) e_n, e_m>")
    p.add_argument("--s", required=True)
    p.add_argument("--g-iwasawa", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--trunc", type=int, default=None)
    p.add_argument("--nodes", type=int, default=None)
    p.add_argument("--vector", help="apply the action to e_n and report the coefficients up to --trunc")
    p.add_argument("--cocycle-at", type=float, default=None,
                   help="report the cocycle (t, theta') at this angle")
    _common_flags(p)

    p = sub.add_parser("ktypes", help="K-type support of a representation / tau_n-spherical families")
    p.add_argument("--rep", help="trivial | D+4 | D-2 | rho | rho:i | rho:0.5")
    p.add_argument("--tau-spherical", type=int, default=None)
    _common_flags(p)

    p = sub.add_parser("ladder", help="invariant-subspace leakage of a discrete-series ladder")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--sign", choices=("+", "-"), default="+")
    p.add_argument("--g-iwasawa", default="1,0,0")
    p.add_argument("--N", type=int, default=24)
    p.add_argument("--tol", type=float, default=None)
    _common_flags(p)

    p = sub.add_parser("separate", help="separation witness on polar orbits")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t0", type=float, required=True)
    p.add_argument("--width", type=float, required=True)
    p.add_argument("--probe", required=True, help="t1,t2: radii of the two orbits to separate")
    p.add_argument("--verify-projection", action="store_true",
                   help="also re-project the witness and report the defects")
    _common_flags(p)

    p = sub.add_parser("gram", help="Gram-matrix independence certificate")
    p.add_argument("--params", required=True, help="comma-separated spectral parameters, e.g. i,2i,0.5")
    p.add_argument("--n", type=int, default=0)
    p.add_argument("--tmax", type=float, default=2.0)
    _common_flags(p)

    p = sub.add_parser("haarcheck", help="translation-invariance oracle for the Haar weights")
    p.add_argument("--grid", default="96,96,128")
    p.add_argument("--tol", type=float, default=0.005)
    _common_flags(p)

    p = sub.add_parser("charcheck", help="character-distribution identity check")
    p.add_argument("--s", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--grid", default="48,48,96")
    p.add_argument("--trunc", type=int, default=16)
    p.add_argument("--t0", type=float, default=0.6)
    p.add_argument("--width", type=float, default=0.3)
    p.add_argument("--refine", action="store_true")
    p.add_argument("--corollary", action="store_true",
                   help="test against a function of the opposite bi-type")
    p.add_argument("--tol", type=float, default=0.02)
    _common_flags(p)

    p = sub.add_parser("suite", help="run the full acceptance battery")
    p.add_argument("--fast", action="store_true")
    _common_flags(p)

    return parser


def _algebra_from_text(text):
    if text in lie.BASIS:
        return lie.BASIS[text]
    return np.array(_parse_floats(text, 9)).reshape(3, 3)


def _handle(args, config: RunConfig):
    """Dispatch to the library; returns (payload, exit_code)."""
    name = config.subcommand

    if name == "iwasawa":
        if args.recompose:
            t, u, theta = _parse_floats(args.recompose, 3)
            g = groups.recompose(groups.IwasawaCoords(t, u, theta))
            return {"matrix": g}, EXIT_OK
        g = _element_from_args(args)
        c = groups.iwasawa(g)
        return {"t": c.t, "u": c.u, "theta": c.theta}, EXIT_OK

    if name == "cartan":
        g = _parse_matrix3(args.matrix)
        c = groups.cartan(g)
        return {"theta1": c.theta1, "t": c.t, "theta2": c.theta2,
                "radius": float(groups.cartan_radius(g))}, EXIT_OK

    if name == "psi":
        return {"matrix": groups.psi(_parse_matrix2(args.sl2))}, EXIT_OK

    if name == "psi-inv":
        g = _parse_matrix3(args.matrix)
        diag = groups.so21_check(g)
        rep = groups.psi_inv(g)
        return {"sl2": rep.matrix,
                "diagnostics": {"form_defect": diag.form_defect,
                                "det_defect": diag.det_defect,
                                "component_ok": diag.component_ok}}, EXIT_OK

    if name == "bracket":
        if args.adw_check:
            dplus, dminus = lie.ad_w_eigencheck()
            return {"defect_plus": dplus, "defect_minus": dminus}, EXIT_OK
        if not args.x or not args.y:
            raise UsageError("bracket needs --x and --y (or --adw-check)")
        return {"matrix": lie.bracket(_algebra_from_text(args.x),
                                      _algebra_from_text(args.y))}, EXIT_OK

    if name == "exp":
        if args.dpsi:
            x = _parse_matrix2(args.dpsi)
            return {"matrix": lie.dpsi(x)}, EXIT_OK
        if not args.algebra:
            raise UsageError("exp needs --algebra (or --dpsi)")
        return {"matrix": lie.exp_matrix(_algebra_from_text(args.algebra))}, EXIT_OK

    if name == "casimir":
        p = reps.SpectralParam.from_s(reps.parse_complex(args.s))
        t, u, theta = _parse_floats(args.g_iwasawa, 3)
        g = groups.recompose(groups.IwasawaCoords(t, u, theta))
        coef = lambda mat: reps.matcoef(p, mat, args.n, args.n)
        ratio = lie.casimir_apply(coef, g, h=args.h) / coef(g)
        return {"ratio": complex(ratio), "s": args.s, "n": args.n}, EXIT_OK

    if name == "spherical":
        w = reps.parse_complex(args.w)
        if args.ray:
            t0, t1, steps = _parse_floats(args.ray, 3)
            ts = np.linspace(t0, t1, int(steps))
            values = hyperbolic.phi_along_ray(w, ts, nodes=args.nodes)
            rows = [[float(t), v.real, v.imag] for t, v in zip(ts, values)]
            return {"columns": ["t", "re_phi", "im_phi"], "rows": rows}, EXIT_OK
        if not args.z:
            raise UsageError("spherical needs --z (or --ray)")
        x, y = _parse_floats(args.z, 2)
        z = complex(x, y)
        payload = {"phi": hyperbolic.phi(w, z, nodes=args.nodes),
                   "chi": complex(hyperbolic.chi(w, z))}
        if args.act:
            t, u, theta = _parse_floats(args.act, 3)
            g = groups.recompose(groups.IwasawaCoords(t, u, theta))
            moved = complex(hyperbolic.act(g, z))
            payload["moved_point"] = moved
        return payload, EXIT_OK

    if name == "eigencheck":
        w = reps.parse_complex(args.w)
        x, y = _parse_floats(args.z, 2)
        res = hyperbolic.eigencheck(w, complex(x, y), h=args.h, nodes=args.nodes)
        payload = {"lhs": res.lhs, "rhs": res.rhs, "rel_err": res.rel_err}
        return payload, EXIT_OK if res.rel_err <= args.tol else EXIT_TOLERANCE

    if name == "matcoef":
        p = reps.SpectralParam.from_s(reps.parse_complex(args.s))
        t, u, theta = _parse_floats(args.g_iwasawa, 3)
        g = groups.recompose(groups.IwasawaCoords(t, u, theta))
        value = reps.matcoef(p, g, args.n, args.m, nodes=args.nodes, N=args.trunc)
        payload = {"value": value, "s": args.s, "n": args.n, "m": args.m}
        if args.vector:
            N = args.trunc if args.trunc else max(abs(args.n), abs(args.m)) + 8
            moved = reps.act_principal(p, g, reps.KFourierVector.basis(N, args.n),
                                       nodes=args.nodes)
            payload["acted_coefficients"] = moved.c
        if args.cocycle_at is not None:
            t_out, theta_out = reps.cocycle(args.cocycle_at, g)
            payload["cocycle"] = {"t": t_out, "theta_out": theta_out}
        return payload, EXIT_OK

    if name == "ktypes":
        payload = {}
        if args.rep:
            p = reps.SpectralParam.parse(args.rep)
            types = reps.k_types(p)
            payload["rep"] = p.label
            payload["k_types"] = types.description
            payload["sample"] = {str(n): bool(types.contains(n)) for n in range(-4, 5)}
        if args.tau_spherical is not None:
            families = reps.tau_spherical_set(args.tau_spherical)
            payload["tau_spherical"] = [fam.label for fam in families]
            payload["character_at_pi_over_3"] = complex(
                equivariant.tau(args.tau_spherical, np.pi / 3.0))
        if not payload:
            raise UsageError("ktypes needs --rep or --tau-spherical")
        return payload, EXIT_OK

    if name == "ladder":
        sign = 1 if args.sign == "+" else -1
        t, u, theta = _parse_floats(args.g_iwasawa, 3)
        g = groups.recompose(groups.IwasawaCoords(t, u, theta))
        leak = reps.discrete_ladder_leakage(args.m, sign, g, args.N)
        payload = {"leakage": leak, "m": args.m, "sign": args.sign, "N": args.N}
        if args.tol is not None and leak > args.tol:
            return payload, EXIT_TOLERANCE
        return payload, EXIT_OK

    if name == "separate":
        profile = equivariant.BumpProfile(args.t0, args.width)
        witness = equivariant.separation_witness(args.n, profile)
        t1, t2 = _parse_floats(args.probe, 2)
        v1 = complex(witness(groups.make_a(t1)))
        v2 = complex(witness(groups.make_a(t2)))
        payload = {"at_t1": v1, "at_t2": v2, "margin": abs(v1 - v2)}
        if args.verify_projection:
            probes = groups.make_a(np.array([t1, t2]))
            reproj = equivariant.project_biequivariant(witness, args.n, nodes=64)
            payload["projection_defect"] = float(np.max(np.abs(reproj(probes) - witness(probes))))
            h = equivariant.right_isotype_project(witness, args.n, nodes=64)
            payload["right_isotype_defect"] = float(np.max(np.abs(h(probes) - witness(probes))))
        return payload, EXIT_OK

    if name == "gram":
        params = [reps.SpectralParam.from_s(reps.parse_complex(tok))
                  for tok in args.params.split(",")]
        res = equivariant.gram_min_eig(params, args.n, region=(0.0, args.tmax))
        return {"min_eig": res.min_eig, "cond": res.cond,
                "params": [p.label for p in params]}, EXIT_OK

    if name == "haarcheck":
        nt, nu, ntheta = (int(v) for v in _parse_floats(args.grid, 3))
        grid = character.HaarGrid(nt=nt, nu=nu, ntheta=ntheta)
        res = character.haar_invariance_check(grid, threads=args.threads)
        direct = character.integrate_G(
            character._oracle_test_function,
            character.HaarGrid(nt=min(nt, 48), nu=min(nu, 48), ntheta=min(ntheta, 64)))
        payload = {"base_integral": res.base_integral,
                   "worst_left": res.worst_left,
                   "worst_right": res.worst_right,
                   "per_translation": res.per_translation,
                   "density_at_origin": groups.haar_density(groups.IwasawaCoords(0.0, 0.0, 0.0)),
                   "coarse_integral": complex(direct)}
        return payload, EXIT_OK if res.worst <= args.tol else EXIT_TOLERANCE

    if name == "charcheck":
        p = reps.SpectralParam.from_s(reps.parse_complex(args.s))
        nt, nu, ntheta = (int(v) for v in _parse_floats(args.grid, 3))
        grid = character.HaarGrid(nt=nt, nu=nu, ntheta=ntheta)
        profile = equivariant.BumpProfile(args.t0, args.width)
        if args.corollary:
            f = equivariant.separation_witness(-args.n, profile)
            res = character.corollary_check(p, args.n, f, grid=grid, N=args.trunc,
                                            threads=args.threads)
        else:
            f = equivariant.separation_witness(args.n, profile)
            res = character.char_identity_check(p, args.n, f, grid=grid, N=args.trunc,
                                                threads=args.threads)
        payload = {"lhs": res.lhs_trace, "rhs": res.rhs_integral,
                   "rel_err": res.rel_err, "offrow_mass": res.offrow_mass,
                   "grid": list(grid.shape), "trunc": res.N, "runtime": res.seconds}
        if args.refine:
            fine = (character.corollary_check if args.corollary else character.char_identity_check)(
                p, args.n, f, grid=grid.refine(), N=args.trunc, threads=args.threads)
            payload["refined"] = {"lhs": fine.lhs_trace, "rhs": fine.rhs_integral,
                                  "rel_err": fine.rel_err, "grid": list(fine.grid.shape)}
        return payload, EXIT_OK if res.rel_err <= args.tol else EXIT_TOLERANCE

    if name == "suite":
        results = acceptance.run_all(fast=args.fast)
        for res in results:
            print(res.line(), file=sys.stderr)
        payload = {"criteria": [
            {"number": r.number, "name": r.name, "passed": r.passed,
             "detail": r.detail, "seconds": r.seconds} for r in results],
            "all_passed": all(r.passed for r in results)}
        return payload, EXIT_OK if payload["all_passed"] else EXIT_TOLERANCE

    raise UsageError(f"unknown subcommand {name!r}")


def run(argv=None) -> int:
    """Parse argv, execute, print; returns the process exit code."""
    started = time.perf_counter()
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    config = RunConfig(args.subcommand, args.format, args.seed, args.threads,
                       args.no_meta, args.out)
    try:
        payload, code = _handle(args, config)
        _emit(payload, config, started)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return code


def main():
    sys.exit(run())
