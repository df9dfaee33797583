"""Command line front end: JSON in, JSON or CSV out.

Complex numbers are written as ``[re, im]`` pairs. Exit codes: 0 member or
success, 1 exterior / non-member, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys

import numpy as np

from . import faces, mobius
from .linalg import NumericalError
from .moment_body import (
    AtomicMeasure,
    Classification,
    ExteriorPointError,
    curve_moments,
    curve_point,
    curve_point_mn,
    decompose,
    decompose_through,
    face_from_atoms,
    is_simplex,
    membership,
    moment_surface,
    state_from_moments,
    surface_coordinates_spherical,
    toeplitz_oracle,
)

COMMANDS = ("membership", "decompose", "curve", "face", "mobius", "intersect", "surface", "sample")

EXIT_OK, EXIT_EXTERIOR, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# -- (de)serialization ------------------------------------------------------


def parse_complex(pair) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    if not (isinstance(pair, (list, tuple)) and len(pair) == 2):
        raise UsageError(f"expected a [re, im] pair, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def parse_vector(items) -> np.ndarray:
    if not isinstance(items, list):
        raise UsageError("expected a list of [re, im] pairs")
    return np.array([parse_complex(z) for z in items], dtype=complex)


def parse_matrix(rows) -> np.ndarray:
    if not (isinstance(rows, list) and rows and all(isinstance(r, list) for r in rows)):
        raise UsageError("expected a matrix as a list of rows of [re, im] pairs")
    m = np.array([[parse_complex(z) for z in r] for r in rows], dtype=complex)
    if m.ndim != 2:
        raise UsageError("ragged matrix")
    return m


def cx(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def cx_matrix(m) -> list:
    return [[cx(z) for z in row] for row in np.asarray(m)]


def cp1_json(pt: mobius.CP1Point) -> dict:
    out = {"vector": [cx(z) for z in pt.v]}
    out["xi"] = "inf" if pt.is_infinity else cx(pt.xi)
    return out


def circle_json(c) -> dict:
    if isinstance(c, mobius.Circle):
        return {"type": "circle", "center": cx(c.center), "radius": c.radius}
    return {"type": "line", "coeff": cx(c.coeff), "offset": c.offset}


# -- job handling -----------------------------------------------------------


def _moments(args, payload) -> np.ndarray:
    if "c" not in payload:
        raise UsageError('payload needs "c": a list of p [re, im] pairs')
    c = parse_vector(payload["c"])
    p = payload.get("p", args.p)
    if p is not None and int(p) != len(c):
        raise UsageError(f"p = {p} but {len(c)} moments given")
    if len(c) < 1:
        raise UsageError("need at least one moment")
    return c


def _anchor(args, payload):
    if args.anchor is not None:
        return args.anchor
    if "anchor" in payload:
        return parse_complex(payload["anchor"])
    return None


def run_membership(args, payload):
    c = _moments(args, payload)
    res = membership(c, args.tol)
    report = {
        "classification": res.classification.value,
        "rank": res.rank,
        "rank_gamma": res.rank_gamma,
        "min_eig": res.min_eig,
        "min_eig_gamma": res.min_eig_gamma,
        "toeplitz_psd": toeplitz_oracle(c, args.tol),
    }
    return report, (EXIT_OK if res.is_member else EXIT_EXTERIOR)


def measure_json(mu: AtomicMeasure, c) -> dict:
    return {
        "atoms": [{"omega": cx(z), "weight": float(w)} for z, w in zip(mu.omegas, mu.weights)],
        "residual": mu.residual(c),
        "condition": mu.condition,
    }


def run_decompose(args, payload):
    c = _moments(args, payload)
    anchor = _anchor(args, payload)
    res = membership(c, args.tol)
    if not res.is_member:
        return {"error": "exterior point", "classification": "exterior"}, EXIT_EXTERIOR
    if anchor is not None and res.classification is Classification.INTERIOR:
        mu = decompose_through(c, anchor, args.tol)
    else:
        mu = decompose(c, args.tol)
    report = measure_json(mu, c)
    report["classification"] = res.classification.value
    return report, EXIT_OK


def _omega(payload) -> complex:
    if "omega" in payload:
        return parse_complex(payload["omega"])
    if "theta" in payload:
        return complex(np.exp(1j * float(payload["theta"])))
    raise UsageError('payload needs "omega": [re, im] or "theta": angle')


def run_curve(args, payload):
    omega = _omega(payload)
    if "m" in payload or "n" in payload:
        m, n = int(payload.get("m", 2)), int(payload.get("n", args.p or 2))
        s = curve_point_mn(m, n, omega)
        moments = curve_moments(m + n - 2, omega)
    else:
        p = int(payload.get("p", args.p or 2))
        s = curve_point(p, omega).state
        moments = curve_moments(p, omega)
    return {"moments": [cx(z) for z in moments], "m": s.m, "n": s.n,
            "rho": cx_matrix(s.rho)}, EXIT_OK


def run_face(args, payload):
    p = int(payload.get("p", args.p or 0))
    if p < 1:
        raise UsageError("face needs p >= 1")
    atoms = parse_vector(payload.get("atoms", []))
    f = face_from_atoms(p, atoms)
    report = {"is_face": f is not None, "atoms": len(atoms),
              "is_simplex": is_simplex(p, atoms, args.tol)}
    if f is not None:
        report["dim_D"], report["dim_E"] = f.dims
    code = EXIT_OK
    if "c" in payload:
        c = _moments(args, payload)
        inside = f is not None and f.contains(state_from_moments(c).state, args.tol)
        report["contains"] = bool(inside)
        code = EXIT_OK if inside else EXIT_EXTERIOR
    return report, code


def run_mobius(args, payload):
    if "A" not in payload:
        raise UsageError('payload needs "A": a 2x2 matrix')
    A = parse_matrix(payload["A"])
    sol = mobius.mobius_solution_set(A, args.tol)
    report = {"count": str(sol.count), "circle_form": mobius.is_circle_form(A)}
    if isinstance(sol, (mobius.Circle, mobius.Line)):
        report["circle"] = circle_json(sol)
    else:
        report["solutions"] = [cp1_json(pt) for pt in sol.points]
        report["degenerate"] = bool(getattr(sol, "degenerate", False))
    return report, EXIT_OK


def run_intersect(args, payload):
    kind = payload.get("kind")
    if kind not in ("G34_G34", "G34_G43"):
        raise UsageError('"kind" must be "G34_G34" or "G34_G43"')
    V, W = parse_matrix(payload["V"]), parse_matrix(payload["W"])
    fn = faces.intersect_G34_G34 if kind == "G34_G34" else faces.intersect_G34_G43
    res = fn(V, W)
    report = {"kind": kind, "classification": res.kind, "degenerate": res.degenerate,
              "extreme_points": [{"x": [cx(z) for z in e.x.v], "y": [cx(z) for z in e.y.v]}
                                 for e in res.points]}
    if res.face is not None:
        report["face"] = {"A": cx_matrix(res.face.A), "circle": circle_json(res.face.circle)}
    return report, EXIT_OK


def run_surface(args, payload):
    if "x" in payload:
        x = parse_vector(payload["x"])
        if np.linalg.norm(x) == 0:
            raise UsageError("x must be nonzero")
        x = x / np.linalg.norm(x)
    elif "phi" in payload:
        phi, theta = float(payload["phi"]), float(payload.get("theta", 0.0))
        x = np.array([np.cos(phi), np.exp(-1j * theta) * np.sin(phi)])
    else:
        raise UsageError('payload needs "x" or "phi"/"theta"')
    S, state = moment_surface(x)
    report = {"S": [float(v) for v in S], "rho": cx_matrix(state.rho)}
    if "phi" in payload:
        report["S_spherical"] = [float(v) for v in surface_coordinates_spherical(phi, theta)]
    return report, EXIT_OK


# -- sampling ---------------------------------------------------------------


def sample_header(p: int) -> list[str]:
    cols = []
    for k in range(1, p + 1):
        cols += [f"c{k}_re", f"c{k}_im"]
    return cols + ["label", "min_eig", "min_eig_gamma"]


def sample_points(p: int, count: int, seed: int, region: float = 1.0, source: str = "polydisc"):
    """Deterministic moment vectors: uniform in the polydisc, or moments of random atoms."""
    rng = np.random.default_rng(seed)
    for _ in range(count):
        if source == "polydisc":
            r = region * np.sqrt(rng.random(p))
            yield r * np.exp(2j * np.pi * rng.random(p))
        elif source == "hull":
            k = int(rng.integers(1, 2 * p + 2))
            om = np.exp(2j * np.pi * rng.random(k))
            w = rng.dirichlet(np.ones(k))
            yield (w[None, :] * om[None, :] ** np.arange(1, p + 1)[:, None]).sum(axis=1)
        else:
            raise UsageError(f"unknown sample source {source!r}")


def run_sample(args, payload, out):
    p = int(payload.get("p", args.p or 2))
    count = int(payload.get("count", 0))
    region = float(payload.get("region", 1.0))
    source = payload.get("source", "polydisc")
    if count < 0 or p < 1:
        raise UsageError("count must be >= 0 and p >= 1")
    counts = {c.value: 0 for c in Classification}
    rows = []
    for c in sample_points(p, count, args.seed, region, source):
        res = membership(c, args.tol)
        counts[res.classification.value] += 1
        row = []
        for z in c:
            row += [repr(float(z.real)), repr(float(z.imag))]
        rows.append(row + [res.classification.value, repr(res.min_eig), repr(res.min_eig_gamma)])
    if args.format == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(sample_header(p))
        w.writerows(rows)
    else:
        header = sample_header(p)
        json.dump([dict(zip(header, r)) for r in rows], out)
        out.write("\n")
    print(json.dumps({"counts": counts}), file=sys.stderr)
    return EXIT_OK


HANDLERS = {
    "membership": run_membership,
    "decompose": run_decompose,
    "curve": run_curve,
    "face": run_face,
    "mobius": run_mobius,
    "intersect": run_intersect,
    "surface": run_surface,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="trigmoment", description=__doc__.splitlines()[0])
    ap.add_argument("--command", required=True, choices=COMMANDS)
    ap.add_argument("--p", type=int, default=None)
    ap.add_argument("--input", default=None, help="JSON payload file, or '-' for stdin")
    ap.add_argument("--tol", type=float, default=1e-9)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", choices=("json", "csv"), default=None)
    ap.add_argument("--anchor", default=None, help="anchor atom as 're,im'")
    return ap


def _read_payload(source):
    if source is None:
        return {}
    if source == "-":
        text = sys.stdin.read()
    else:
        with open(source) as fh:
            text = fh.read()
    payload = json.loads(text) if text.strip() else {}
    if not isinstance(payload, dict):
        raise UsageError("payload must be a JSON object")
    return payload


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.tol <= 0:
            raise UsageError("--tol must be positive")
        if args.seed < 0:
            raise UsageError("--seed must be nonnegative")
        if args.anchor is not None:
            re_, im_ = (float(t) for t in args.anchor.split(","))
            args.anchor = complex(re_, im_)
        if args.format is None:
            args.format = "csv" if args.command == "sample" else "json"
        payload = _read_payload(args.input)
        if args.command == "sample":
            return run_sample(args, payload, out)
        if args.format != "json":
            raise UsageError(f"{args.command} only emits json")
        report, code = HANDLERS[args.command](args, payload)
    except (UsageError, json.JSONDecodeError, KeyError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ExteriorPointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_EXTERIOR
    except (NumericalError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    json.dump(report, out)
    out.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
