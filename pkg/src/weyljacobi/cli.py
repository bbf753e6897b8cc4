"""Command-line front end.

Subcommands: ``direct``, ``inverse``, ``roundtrip``, ``weyl``,
``borg-marchenko``, ``classify`` and ``continuity``.  JSON outputs carry
the ``weyl-jacobi/1`` payload plus a ``report`` object with the command,
echoed inputs, named residuals and metadata.  ``weyl`` writes CSV.

Exit codes: 0 success, 1 tolerance failure, 2 input error, 3 numeric error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import TEST_BANK_VERSION, borg_marchenko_fit, classify, continuity_check, scaled_difference
from .direct import direct_map, moment_check, weyl_M
from .errors import InputError, NumericError, PoleProximity, SchemaError
from .inverse import inverse_map, roundtrip_error, weyl_R
from .io import (FORMAT, coefficients_from_dict, coefficients_to_dict, csv_text, dumps, read_json,
                 spectral_from_dict, spectral_to_dict)
from .jacobi import JacobiCoefficients, random_coefficients
from .matops import GAUGE_TOL, RANK_TOL
from .measure import to_matrix_measure

EXIT_OK, EXIT_TOL, EXIT_INPUT, EXIT_NUMERIC = 0, 1, 2, 3
DEFAULT_RADII = "10:1e5:9:log"
CORRUPTION = 1e-6
MAX_MOMENT_ORDER = 5
ON_CUT_TOL = 1e-14

WEYL_COLUMNS = (["z_re", "z_im", "w_re", "w_im"]
                + [f"M{i}{k}_{part}" for i in range(2) for k in range(2) for part in ("re", "im")]
                + [f"R{i}{k}_{part}" for i in range(2) for k in range(2) for part in ("re", "im")]
                + ["diagonal_identity_residual", "MR_offdiagonal_residual", "flag"])


def parse_radii(text: str) -> np.ndarray:
    """``"r0:r1:count:log"`` or ``"r0:r1:count:lin"`` to an array of radii."""
    parts = text.split(":")
    if len(parts) != 4 or parts[3] not in ("log", "lin"):
        raise InputError(f"radii {text!r} must look like r0:r1:count:log")
    try:
        r0, r1, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise InputError(f"radii {text!r} has a non-numeric field") from None
    if not (0.0 < r0 < r1) or count < 2:
        raise InputError("radii need 0 < r0 < r1 and count >= 2")
    if parts[3] == "log":
        return np.logspace(np.log10(r0), np.log10(r1), count)
    return np.linspace(r0, r1, count)


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise InputError(f"cannot parse complex number {text!r}") from None


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise InputError(f"cannot write {out}: {exc.strerror}") from None


def _report(command: str, inputs: dict, residuals: dict, metadata: dict) -> dict:
    meta = {"version": __version__}
    meta.update(metadata)
    return {"command": command, "inputs": inputs, "residuals": residuals, "metadata": meta}


def _load_coefficients(path) -> JacobiCoefficients:
    return coefficients_from_dict(read_json(path))


def _load_spectral(path):
    return spectral_from_dict(read_json(path))


def _moment_residuals(c: JacobiCoefficients, sd, n: int) -> dict:
    even, odd = 0.0, 0.0
    for k in range(min(MAX_MOMENT_ORDER, (n - 2) // 2) + 1):
        e, o = moment_check(c, sd, k, n)
        even, odd = max(even, e), max(odd, o)
    return {"moment_even_max": even, "moment_odd_max": odd}


def cmd_direct(args) -> int:
    c = _load_coefficients(args.coefficients)
    n = c.size if args.n is None else args.n
    sd = direct_map(c, n)
    doc = spectral_to_dict(sd)
    res = _moment_residuals(c, sd, n) if n >= 2 else {}
    doc["report"] = _report("direct", {"coefficients": args.coefficients, "n": n}, res, {"direct": sd.meta})
    _emit(dumps(doc), args.out)
    return EXIT_OK


def _inverse_report(trace, bc) -> tuple[dict, dict]:
    residuals = {"gauge_max": trace.max_residual()}
    metadata = {"terminated": bc.terminated, "singular_at": trace.singular_at,
                "rank_tol": RANK_TOL, "gauge_tol": GAUGE_TOL}
    return residuals, metadata


def cmd_inverse(args) -> int:
    sd = _load_spectral(args.spectral)
    c, trace, bc = inverse_map(sd, args.depth, full_output=True)
    doc = coefficients_to_dict(c)
    res, meta = _inverse_report(trace, bc)
    doc["report"] = _report("inverse", {"spectral": args.spectral, "depth": args.depth}, res, meta)
    _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_roundtrip(args) -> int:
    if args.coefficients is not None:
        c = _load_coefficients(args.coefficients)
        if args.n is not None:
            c = c.truncated(args.n)
        inputs = {"coefficients": args.coefficients, "n": c.size}
    elif args.seed is not None:
        n = 12 if args.n is None else args.n
        c = random_coefficients(n, np.random.default_rng(args.seed))
        inputs = {"seed": args.seed, "n": n}
    else:
        raise InputError("roundtrip needs a coefficient file or --seed")
    sd = direct_map(c)
    if args.corrupt_intermediate:
        sd = type(sd)(sd.s * (1.0 + CORRUPTION), sd.weight, sd.psi)
    c2, trace, bc = inverse_map(sd, full_output=True)
    err = roundtrip_error(c, c2)
    res, meta = _inverse_report(trace, bc)
    res["max_relative_error"] = err
    meta["tol"] = args.tol
    doc = {"format": FORMAT, "passed": bool(err <= args.tol),
           "original": coefficients_to_dict(c), "recovered": coefficients_to_dict(c2)}
    doc["report"] = _report("roundtrip", inputs, res, meta)
    _emit(dumps(doc), args.out)
    return EXIT_OK if err <= args.tol else EXIT_TOL


def _weyl_row(sd, m, z: complex, w: complex) -> list:
    head = [z.real, z.imag, w.real, w.imag]
    if abs(z.imag) <= ON_CUT_TOL * max(1.0, abs(z)):
        return head + [float("nan")] * 18 + ["on_cut"]
    try:
        M = weyl_M(sd, w)
        R = weyl_R(m, z)
    except PoleProximity:
        return head + [float("nan")] * 18 + ["pole"]
    diag = abs(z * M[0, 0] - (M[1, 1] - 1.0) / z)
    off = max(abs(R[0, 1] - M[0, 1]), abs(R[1, 0] - M[1, 0]),
              abs(R[0, 0] - z * M[0, 0]), abs(R[1, 1] - z * M[0, 0]))
    vals = [part for X in (M, R) for v in X.reshape(-1) for part in (v.real, v.imag)]
    return head + [float(v) for v in vals] + [float(diag), float(off), "ok"]


def cmd_weyl(args) -> int:
    sd = _load_spectral(args.spectral)
    m = to_matrix_measure(sd)
    points = []
    for text in args.z or []:
        z = parse_complex(text)
        points.append((z, z * z))
    if args.radii is not None:
        phase = np.exp(1j * args.ray_angle)
        for r in parse_radii(args.radii):
            w = complex(r * phase)
            # principal root, in the upper half plane off the cut
            points.append((complex(np.sqrt(w)), w))
    if not points:
        raise InputError("weyl needs --z or --radii")
    rows = [_weyl_row(sd, m, z, w) for z, w in points]
    _emit(csv_text(WEYL_COLUMNS, rows), args.out)
    return EXIT_OK


def _agreement_depth(c1: JacobiCoefficients, c2: JacobiCoefficients) -> int | None:
    """Last index k with ``a_j, b_j`` equal for all ``j <= k`` (-1 if ``b_0`` differs)."""
    n = min(c1.size, c2.size)
    for k in range(n):
        if c1.b[k] != c2.b[k] or (k < n - 1 and c1.a[k] != c2.a[k]):
            return k - 1
    return None


def cmd_borg_marchenko(args) -> int:
    c1 = _load_coefficients(args.first)
    c2 = _load_coefficients(args.second)
    radii = parse_radii(args.radii)
    sd1, sd2 = direct_map(c1), direct_map(c2)
    fit = borg_marchenko_fit(sd1, sd2, args.ray_angle, radii)
    phase = np.exp(1j * args.ray_angle)
    samples = []
    for r in radii:
        d, floor = scaled_difference(sd1, sd2, r * phase)
        samples.append({"r": float(r), "D": d, "floor": floor})
    doc = {"format": FORMAT,
           "fit": {"slope": fit.slope, "intercept": fit.intercept, "max_deviation": fit.max_deviation,
                   "ray_angle": fit.ray_angle, "radii_used": list(fit.radii), "identical": fit.identical},
           "agreement_depth": _agreement_depth(c1, c2), "samples": samples}
    doc["report"] = _report("borg-marchenko", {"first": args.first, "second": args.second,
                                               "radii": args.radii}, {}, {})
    _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_classify(args) -> int:
    sd = _load_spectral(args.spectral)
    cl = classify(sd, args.tol)
    doc = {"format": FORMAT, "self_adjoint": cl.self_adjoint, "free_diagonal": cl.free_diagonal,
           "max_im_psi": cl.max_im_psi, "max_abs_psi": cl.max_abs_psi}
    doc["report"] = _report("classify", {"spectral": args.spectral}, {}, {"tol": args.tol})
    _emit(dumps(doc), args.out)
    return EXIT_OK


def _manifest_entry(entry, base: Path) -> JacobiCoefficients:
    if isinstance(entry, str):
        return _load_coefficients(base / entry)
    if isinstance(entry, dict):
        return coefficients_from_dict(entry)
    raise SchemaError("manifest entries must be coefficient objects or file paths")


def cmd_continuity(args) -> int:
    """Manifest: ``{"limit": C, "sequence": [C, ...], "n": int?}``; C is an object or a relative path."""
    doc = read_json(args.manifest)
    if "limit" not in doc or not isinstance(doc.get("sequence"), list) or not doc["sequence"]:
        raise SchemaError("manifest needs 'limit' and a non-empty 'sequence'")
    base = Path(args.manifest).parent
    limit = _manifest_entry(doc["limit"], base)
    seq = [_manifest_entry(e, base) for e in doc["sequence"]]
    n = doc.get("n")
    if n is not None and (isinstance(n, bool) or not isinstance(n, int)):
        raise SchemaError("'n' must be an integer")
    rep = continuity_check(seq, limit, n=n)
    out = {"format": FORMAT, "nu_residuals": rep.nu_residuals, "psi_residuals": rep.psi_residuals,
           "strong_residuals": rep.strong_residuals}
    out["report"] = _report("continuity", {"manifest": args.manifest, "members": len(seq)}, {},
                            {"test_bank": TEST_BANK_VERSION})
    _emit(dumps(out), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="weyljacobi", description=__doc__.split("\n\n")[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text, description=help_text)
        sp.set_defaults(func=func)
        sp.add_argument("--out", help="output file (default: stdout)")
        return sp

    sp = add("direct", cmd_direct, "spectral data (nu, psi) of a coefficient file")
    sp.add_argument("coefficients")
    sp.add_argument("-n", type=int, help="truncation size (default: all coefficients)")

    sp = add("inverse", cmd_inverse, "Jacobi coefficients from a spectral file")
    sp.add_argument("spectral")
    sp.add_argument("--depth", type=int, help="maximum number of diagonal coefficients")

    sp = add("roundtrip", cmd_roundtrip, "direct then inverse map; exit 1 if the error exceeds --tol")
    sp.add_argument("coefficients", nargs="?")
    sp.add_argument("-n", type=int, help="truncation size (random instances default to 12)")
    sp.add_argument("--seed", type=int, help="draw a random instance instead of reading a file")
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--corrupt-intermediate", action="store_true", help=argparse.SUPPRESS)

    sp = add("weyl", cmd_weyl, "CSV of M(z^2), R(z) and identity residuals on a grid")
    sp.add_argument("spectral")
    sp.add_argument("--z", action="append", help="evaluation point z, e.g. 2j (repeatable)")
    sp.add_argument("--radii", help="grid in w = z^2 as r0:r1:count:log|lin")
    sp.add_argument("--ray-angle", type=float, default=np.pi, help="arg w of the grid ray")

    sp = add("borg-marchenko", cmd_borg_marchenko, "decay fit of the scaled Weyl-matrix difference")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.add_argument("--radii", default=DEFAULT_RADII)
    sp.add_argument("--ray-angle", type=float, default=np.pi)

    sp = add("classify", cmd_classify, "self-adjointness and vanishing diagonal from psi")
    sp.add_argument("spectral")
    sp.add_argument("--tol", type=float, default=1e-10)

    sp = add("continuity", cmd_continuity, "weak-convergence residuals for a manifest of coefficient sets")
    sp.add_argument("manifest")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
