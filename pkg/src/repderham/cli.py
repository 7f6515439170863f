"""Command-line interface: ``repderham <command> [options]``.

Exit codes: 0 success, 1 failed verification, 2 usage error, 3 budget
exceeded, 4 internal error or consistency failure.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .algebra import BudgetExceeded, ParseError, PolynomialError, format_rational
from .varieties import SURFACES, ArityError, UnknownSurfaceError, parse_params

SCHEMA = 1
EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_BUDGET, EXIT_INTERNAL = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


class ConsistencyError(Exception):
    pass


def _compact(p) -> str:
    return str(p).replace(" ", "")


def _q(x) -> str:
    return format_rational(x)


def _b_text(vals) -> str:
    return ",".join(_q(v) for v in vals)


def _matrix(m) -> list:
    return [[_q(x) for x in row] for row in m]


# ---------------------------------------------------------------------------
# commands: each returns (exit code, payload dict, text lines)
# ---------------------------------------------------------------------------

def cmd_singular_locus(args):
    from .smoothness import singular_locus, singular_locus_slice

    if args.slice is not None:
        fixed = parse_params(args.slice)
        res = singular_locus_slice(args.surface, fixed, budget_seconds=args.budget_seconds, method=args.method)
        payload = {
            "surface": args.surface,
            "slice": {
                "fixed": _b_text(res.fixed),
                "variable": res.variable,
                "generator": _compact(res.generator),
                "squarefree": _compact(res.squarefree.to_str(res.variable)),
                "expected_squarefree": _compact(res.expected_squarefree.to_str(res.variable)),
                "matches": res.matches,
                "degenerate": res.degenerate,
            },
        }
        lines = [
            f"{args.surface} slice {res.variable} free, others = {_b_text(res.fixed)}",
            f"eliminant: {res.generator}",
            f"square-free part: {res.squarefree.to_str(res.variable)}",
            f"matches psi: {res.matches}",
        ]
        return (EXIT_OK if res.matches or res.degenerate else EXIT_INTERNAL), payload, lines
    res = singular_locus(args.surface, budget_seconds=args.budget_seconds, method=args.method)
    payload = {
        "surface": args.surface,
        "method": res.extra["method"],
        "psi": _compact(res.psi) if res.psi is not None else None,
        "generators": [_compact(g) for g in res.generators],
        "smooth": None,
    }
    # the chart route yields the radical of the locus
    label = "psi" if res.extra["method"] == "minors" else "rad psi"
    lines = [f"{label} = {res.psi}" if res.psi is not None else "generators:"]
    if res.psi is None:
        lines += [f"  {g}" for g in res.generators]
    return EXIT_OK, payload, lines


def _require_b(args, surface=None):
    if args.b is None:
        raise UsageError("--b is required")
    return parse_params(args.b)


def cmd_fiber_smooth(args):
    from .smoothness import is_smooth_fiber
    from .varieties import _normalize_params, psi_eval

    vals = _normalize_params(args.surface, _require_b(args))
    smooth = is_smooth_fiber(args.surface, vals)
    value = psi_eval(args.surface, vals)
    payload = {"surface": args.surface, "b": _b_text(vals), "smooth": smooth, "psi_value": _q(value)}
    lines = [f"{args.surface} at b = {_b_text(vals)}: {'smooth' if smooth else 'singular'} (psi = {_q(value)})"]
    if smooth != (value != 0):
        raise ConsistencyError(f"smoothness test and psi disagree at b = {_b_text(vals)}")
    return EXIT_OK, payload, lines


def cmd_h2_basis(args):
    from .derham import reduce_top, singular_h2_basis, top_cohomology_basis, x_ring
    from .forms import form_print
    from .smoothness import is_smooth_fiber
    from .varieties import _normalize_params, fiber_polynomial

    if args.surface == "sigma12":
        raise UsageError("h2-basis handles sigma11 and sigma04")
    vals = _normalize_params(args.surface, _require_b(args))
    smooth = is_smooth_fiber(args.surface, vals)
    if smooth:
        basis = top_cohomology_basis(args.surface, vals, args.degree_bound, check_smooth=False)
    elif args.surface == "sigma11" and vals[0] in (2, -2):
        basis = singular_h2_basis(vals[0])
    else:
        raise UsageError(f"the {args.surface} fiber at b = {_b_text(vals)} is singular")
    payload = {
        "surface": args.surface,
        "b": _b_text(vals),
        "smooth": smooth,
        "dimension": basis.dimension,
        "basis": basis.labels(),
        "representatives": [form_print(c) for c in basis.classes],
        "route": basis.route,
    }
    if basis.witness is not None:
        payload["witness"] = basis.witness.to_json()
    payload.update({k: v for k, v in basis.extra.items() if k in ("sigma11_parameter", "identity", "quotient_basis")})
    lines = [f"dimension {basis.dimension}"] + [f"  {lab}" for lab in basis.labels()]
    if args.certificate:
        if not smooth:
            raise UsageError("certificates are produced for smooth fibers only")
        ring = x_ring()
        f = fiber_polynomial(args.surface, vals).to_ring(ring)
        forms = [ring.parse(t) for t in args.reduce] if args.reduce else [
            ring.monomial(m) for m in _monomials(3)
        ]
        out = []
        for w in forms:
            _, cert = reduce_top(f, w)
            if not cert.replay():
                raise ConsistencyError(f"certificate for {w} does not replay")
            out.append(cert.to_json())
        with open(args.certificate, "w") as fh:
            json.dump({"schema": SCHEMA, "f": str(f), "reductions": out}, fh, indent=1, sort_keys=True)
        payload["certificate"] = {"path": args.certificate, "reductions": len(out)}
        lines.append(f"wrote {len(out)} certificates to {args.certificate}")
    return EXIT_OK, payload, lines


def _monomials(deg):
    return [(a, b, c) for s in range(deg + 1) for a in range(s, -1, -1) for b in range(s - a, -1, -1)
            for c in (s - a - b,)]


def cmd_gauss_manin(args):
    from .gaussmanin import connection_matrix, eta_factorization, handwritten_eta, residue

    eta = handwritten_eta() if args.eta == "printed" else eta_factorization()
    E = connection_matrix(eta)
    res = {}
    for p in E.poles() + ["inf"]:
        res[p if isinstance(p, str) else _q(p)] = _matrix(residue(E, p))
    payload = {
        "eta": eta.text(),
        "E": [[pf.to_json() for pf in row] for row in E.partial_fractions()],
        "residues": res,
        "blocks": E.blocks(),
    }
    lines = ["E(t):"] + ["  [" + ", ".join(r) + "]" for r in E.text_rows()]
    for p, m in res.items():
        lines.append(f"residue at {p}: {m}")
    lines.append(f"blocks: {E.blocks()}")
    return EXIT_OK, payload, lines


def cmd_monodromy(args):
    from .gaussmanin import connection_matrix, rank2_subsystem
    from .monodromy import INF, exact_monodromies, local_system_data, loop_product, monodromy_numeric

    E = rank2_subsystem(connection_matrix())
    data = local_system_data(E)
    exact = exact_monodromies(E)
    points = {}
    lines = []
    for p in data.residues:
        key = p if isinstance(p, str) else _q(p)
        m = exact[p]
        entry = data.to_json()[key]
        entry["exact"] = m.to_json()["matrix"]
        if "phi" in m.details:
            entry["phi"] = _matrix(m.details["phi"])
        lines.append(f"N at {key}: {entry['exact']}  (eigenvalues of residue {entry['eigenvalues']})")
        if args.numeric:
            center, radius = (0, args.radius_inf) if p == INF else (float(p), args.radius)
            num = monodromy_numeric(E, center, radius, args.steps)
            if p == INF:
                # the circle runs clockwise around infinity
                import numpy as np

                inv = np.linalg.inv(num.to_numpy())
                num = type(num)(INF, tuple(tuple(complex(x) for x in r) for r in inv), False, num.error)
            nj = num.to_json()
            entry["numeric"] = {
                "matrix": nj["matrix"],
                "error_estimate": nj["error_estimate"],
                "trace": f"{round(num.trace().real, 10) + 0.0:.10f}",
                "det": f"{round(num.det().real, 10) + 0.0:.10f}",
            }
            lines.append(f"  numeric: trace {entry['numeric']['trace']}, det {entry['numeric']['det']}, "
                         f"error {nj['error_estimate']}")
        points[key] = entry
    payload = {"points": points}
    if args.numeric:
        lp = loop_product(E, steps=args.steps)
        payload["loop_product"] = lp.to_json()
        lines.append(f"H_inf H_2 H_-2 - I: {lp.residual:.3e} (error {lp.error:.3e})")
    return EXIT_OK, payload, lines


def cmd_verify(args):
    from .acceptance import run_all

    only = {int(x) for x in args.criteria.split(",")} if args.criteria else None
    opts = {"threads": args.threads}
    results = run_all(only, **opts)
    lines = [r.line() for r in results]
    payload = {
        "criteria": [
            {"number": r.number, "title": r.title, "passed": r.passed, "detail": r.detail}
            for r in results
        ],
        "passed": all(r.passed for r in results),
    }
    return (EXIT_OK if payload["passed"] else EXIT_VERIFY), payload, lines


COMMANDS = {
    "singular-locus": cmd_singular_locus,
    "fiber-smooth": cmd_fiber_smooth,
    "h2-basis": cmd_h2_basis,
    "gauss-manin": cmd_gauss_manin,
    "monodromy": cmd_monodromy,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--budget-seconds", type=float, default=300)
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--degree-bound", type=int, default=5)

    surf = argparse.ArgumentParser(add_help=False)
    surf.add_argument("--surface", choices=SURFACES, default="sigma11")

    parser = argparse.ArgumentParser(
        prog="repderham",
        description="Singular loci, de Rham bases, Gauss-Manin connection and monodromy.",
        epilog="exit codes: 0 ok, 1 failed verification, 2 usage, 3 budget exceeded, 4 internal",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("singular-locus", parents=[common, surf], help="eliminate to the singular locus")
    p.add_argument("--slice", help="fix every parameter but the first, e.g. 0,0,0")
    p.add_argument("--method", choices=("auto", "minors", "charts"), default="auto",
                   help="Jacobian minors, rank-drop charts, or charts only above codimension 1")

    p = sub.add_parser("fiber-smooth", parents=[common, surf], help="smoothness of one fiber")
    p.add_argument("--b", help="comma-separated exact rationals")

    p = sub.add_parser("h2-basis", parents=[common, surf], help="top cohomology basis of a fiber")
    p.add_argument("--b", help="comma-separated exact rationals")
    p.add_argument("--certificate", help="write reduction certificates to this JSON file")
    p.add_argument("--reduce", action="append", help="polynomial coefficient of a top form to certify")

    p = sub.add_parser("gauss-manin", parents=[common], help="connection matrix and residues")
    p.add_argument("--eta", choices=("printed", "constructed"), default="printed")

    p = sub.add_parser("monodromy", parents=[common], help="local monodromy of the rank-2 block")
    p.add_argument("--numeric", action="store_true", help="add the numeric holonomy oracle")
    p.add_argument("--radius", type=float, default=1.0, help="loop radius around 2 and -2")
    p.add_argument("--radius-inf", type=float, default=10.0, help="loop radius around infinity")
    p.add_argument("--steps", type=int, default=256)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    p.add_argument("--criteria", help="comma-separated criterion numbers")
    return parser


def _merge_negative_values(argv: Sequence[str]) -> list:
    # "--b -2,1" would otherwise be read as an option
    out, it = [], iter(argv)
    for a in it:
        if a in ("--b", "--slice"):
            nxt = next(it, None)
            out.append(a if nxt is None else f"{a}={nxt}")
        else:
            out.append(a)
    return out


def _emit(args, code, payload, lines, out):
    if args.format == "json":
        body = {"schema": SCHEMA, "command": args.command, **payload}
        if code == EXIT_BUDGET:
            body["status"] = "budget_exceeded"
        out.write(json.dumps(body, sort_keys=False) + "\n")
    else:
        out.write("\n".join(lines) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    argv = _merge_negative_values(sys.argv[1:] if argv is None else list(argv))
    parser = build_parser()
    args = parser.parse_args(argv)
    out = sys.stdout
    try:
        code, payload, lines = COMMANDS[args.command](args)
    except BudgetExceeded as exc:
        payload = {"status": "budget_exceeded", "partial": exc.state.summary()}
        _emit(args, EXIT_BUDGET, payload, [f"budget of {args.budget_seconds:g}s exceeded: {exc.state.summary()}"], out)
        return EXIT_BUDGET
    except (UsageError, UnknownSurfaceError, ArityError, ParseError) as exc:
        print(f"repderham: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConsistencyError as exc:
        print(f"repderham: consistency failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except PolynomialError as exc:
        print(f"repderham: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    _emit(args, code, payload, lines, out)
    return code


if __name__ == "__main__":
    sys.exit(main())
