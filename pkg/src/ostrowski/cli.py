"""Command line front end.

Subcommands: encode, decode, sigma, convergents, correlate, fourier,
spectrum, verify, experiment.  Exit codes: 0 success, 1 a check or
verification failed, 2 usage or validation error, 3 range/overflow/cap error.

Heavy imports happen inside the handlers so that --threads can pin the BLAS
thread pools before numpy comes up.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_RANGE = 3

_THREAD_VARS = ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS")


def _config_dict(args: argparse.Namespace) -> dict:
    skip = {"func", "out", "format"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def _emit(args, payload: dict, rows, header) -> None:
    """Write the result as JSON (default) or CSV with a config comment line."""
    if args.format == "csv":
        lines = ["# config: " + json.dumps(_config_dict(args))]
        lines.append(",".join(header))
        lines += [",".join(str(c) for c in row) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _scale_fn(args, upto: int):
    from .alphafun import parse_fn_spec
    from .cfrac import parse_alpha_spec, scale_for

    scale = scale_for(parse_alpha_spec(args.alpha), upto)
    return scale, parse_fn_spec(args.fn or "theta:0.5", scale)


# --- handlers -----------------------------------------------------------------

def cmd_encode(args) -> int:
    from .cfrac import parse_alpha_spec, scale_for
    from .numeration import encode, psi

    scale = scale_for(parse_alpha_spec(args.alpha), args.n + 1)
    d = encode(args.n, scale)
    payload = {
        "config": _config_dict(args),
        "n": args.n,
        "digits": list(d.digits),
        "sigma": d.sigma,
        "psi": {str(lam): psi(args.n, lam, scale) for lam in (args.lam or [])},
    }
    header = ["n", "sigma", "digits"] + [f"psi_{lam}" for lam in (args.lam or [])]
    row = [args.n, d.sigma, ";".join(map(str, d.digits))]
    row += [payload["psi"][str(lam)] for lam in (args.lam or [])]
    _emit(args, payload, [row], header)
    return EXIT_OK


def cmd_decode(args) -> int:
    from .cfrac import expand, parse_alpha_spec
    from .numeration import DigitString, decode

    digits = tuple(int(t) for t in args.digits.split(",") if t.strip() != "")
    scale = expand(parse_alpha_spec(args.alpha), max(len(digits), 2))
    n = decode(DigitString(digits, scale))
    payload = {"config": _config_dict(args), "digits": list(digits), "n": n}
    _emit(args, payload, [[";".join(map(str, digits)), n]], ["digits", "n"])
    return EXIT_OK


def cmd_sigma(args) -> int:
    from .cfrac import parse_alpha_spec, scale_for
    from .numeration import sigma

    scale = scale_for(parse_alpha_spec(args.alpha), max(args.n) + 1)
    rows = [[n, sigma(n, scale)] for n in args.n]
    payload = {"config": _config_dict(args), "rows": [{"n": n, "sigma": s} for n, s in rows]}
    _emit(args, payload, rows, ["n", "sigma"])
    return EXIT_OK


def cmd_convergents(args) -> int:
    from .cfrac import alpha_value, expand, expand_max, parse_alpha_spec

    spec = parse_alpha_spec(args.alpha)
    scale = expand(spec, args.depth) if args.depth else expand_max(spec)
    rows = [[i, scale.quotients[i - 1] if i else "", scale.p[i], scale.q[i]]
            for i in range(scale.K + 1)]
    payload = {
        "config": _config_dict(args),
        "rows": [{"i": r[0], "a": r[1] or None, "p": r[2], "q": r[3]} for r in rows],
    }
    if scale.K >= 2:
        try:
            approx = alpha_value(spec, min(scale.K - 1, 40))
        except (IndexError, OverflowError):
            approx = None  # finite quotient list too short for the error bound
        if approx is not None:
            payload["alpha"] = approx.value
            payload["alpha_error_bound"] = approx.error_bound
    _emit(args, payload, rows, ["i", "a", "p", "q"])
    return EXIT_OK


def cmd_correlate(args) -> int:
    from .spectral import correlation_profile

    _, g = _scale_fn(args, args.N + args.R)
    prof = correlation_profile(g, args.R, args.N)
    rows = [[r, prof.gamma[r].real, prof.gamma[r].imag, abs(prof.gamma[r])]
            for r in range(args.R)]
    payload = {
        "config": _config_dict(args),
        "quadratic_mean": prof.quadratic_mean,
        "absolute_mean": prof.absolute_mean,
        "rows": [{"r": r, "re": re, "im": im, "abs": ab} for r, re, im, ab in rows],
    }
    _emit(args, payload, rows, ["r", "re", "im", "abs"])
    return EXIT_OK


def cmd_fourier(args) -> int:
    from .alphafun import parse_fn_spec
    from .cfrac import expand_max, parse_alpha_spec
    from .spectral import fourier_coeffs, parseval_check

    scale = expand_max(parse_alpha_spec(args.alpha))
    g = parse_fn_spec(args.fn or "theta:0.5", scale)
    table = fourier_coeffs(g, args.lam)
    lhs, rhs, delta = parseval_check(g, args.lam)
    rows = [[h, table.G[h].real, table.G[h].imag, abs(table.G[h])] for h in range(table.q)]
    payload = {
        "config": _config_dict(args),
        "lam": args.lam,
        "q": table.q,
        "parseval_delta": delta,
        "rows": [{"h": h, "re": re, "im": im, "abs": ab} for h, re, im, ab in rows],
    }
    _emit(args, payload, rows, ["h", "re", "im", "abs"])
    return EXIT_OK


def cmd_spectrum(args) -> int:
    from .spectral import spectrum_scan

    _, g = _scale_fn(args, args.N)
    scan = spectrum_scan(g, args.N, grid_size=args.grid)
    order = scan.grid.argsort()[::-1][:5]
    rows = [[int(j), j / args.grid, float(scan.grid[j])] for j in order]
    payload = {
        "config": _config_dict(args),
        "beta_peak": scan.beta_peak,
        "peak_value": scan.peak_value,
        "top_grid_points": [{"j": j, "beta": b, "value": v} for j, b, v in rows],
    }
    _emit(args, payload, [[scan.beta_peak, scan.peak_value]] , ["beta_peak", "peak_value"])
    return EXIT_OK


def cmd_verify(args) -> int:
    from .harness import verify_all

    only = args.only.split(",") if args.only else None
    reports = verify_all(seed=args.seed, only=only, fn_spec=args.fn)
    for rep in reports:
        status = "PASS" if rep.ok else "FAIL"
        print(f"{status} {rep.check_name}: {rep.instances_passed}/{rep.instances_run} "
              f"instances, worst margin {rep.worst_margin:.3e}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump([json.loads(rep.to_json()) for rep in reports], fh, indent=2)
            fh.write("\n")
    return EXIT_OK if all(rep.ok for rep in reports) else EXIT_CHECK_FAILED


def cmd_experiment(args) -> int:
    from .harness import ExperimentConfig, pseudorandomness_experiment, spectrum_experiment

    config = ExperimentConfig(
        alpha_spec=args.alpha,
        fn_spec=args.fn or "theta:0.5",
        N=args.N,
        R_list=tuple(int(t) for t in args.R_list.split(",")),
        lambda_list=tuple(int(t) for t in args.lambdas.split(",")) if args.lambdas else (),
        seed=args.seed,
        output_path=args.out,
        format=args.format,
    )
    runner = {"pseudorandomness": pseudorandomness_experiment,
              "spectrum": spectrum_experiment}[args.kind]
    payload = runner(config)
    if args.out:
        print(f"wrote {args.out} ({config.format}), "
              f"runtime {payload['runtime_seconds']:.2f}s")
    else:
        json.dump(payload, sys.stdout, indent=2)
        sys.stdout.write("\n")
    return EXIT_OK


# --- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", default="golden",
                        help="quotient spec: golden | silver | periodic:<pre>/<per> | list:<a1,...>")
    common.add_argument("--fn", default=None,
                        help="function spec: theta:<x>[+beta:<y>] | atoms:<path>[+beta:<y>]")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=int, default=None,
                        help="pin BLAS/OpenMP thread pools before numpy loads")

    parser = argparse.ArgumentParser(prog="ostrowski",
                                     description="Ostrowski numeration toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", parents=[common], help="digits of n")
    p.add_argument("n", type=int)
    p.add_argument("--lam", type=int, action="append", help="also report psi at this level")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", parents=[common], help="value of a digit string")
    p.add_argument("digits", help="comma-separated digits, least significant first")
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("sigma", parents=[common], help="digit sums")
    p.add_argument("n", type=int, nargs="+")
    p.set_defaults(func=cmd_sigma)

    p = sub.add_parser("convergents", parents=[common], help="convergent table")
    p.add_argument("--depth", type=int, default=None)
    p.set_defaults(func=cmd_convergents)

    p = sub.add_parser("correlate", parents=[common], help="autocorrelation profile")
    p.add_argument("--N", type=int, default=10**5)
    p.add_argument("--R", type=int, default=256)
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("fourier", parents=[common], help="level-lam Fourier table")
    p.add_argument("--lam", type=int, required=True)
    p.set_defaults(func=cmd_fourier)

    p = sub.add_parser("spectrum", parents=[common], help="Fourier-Bohr peak scan")
    p.add_argument("--N", type=int, default=10**5)
    p.add_argument("--grid", type=int, default=4096)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", parents=[common], help="run the check battery")
    p.add_argument("--only", default=None, help="comma list of check families to run")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("experiment", parents=[common], help="run a sweep experiment")
    p.add_argument("kind", choices=("pseudorandomness", "spectrum"))
    p.add_argument("--N", type=int, default=10**6)
    p.add_argument("--R-list", dest="R_list", default="32,64,128,256,512,1024,2048,4096")
    p.add_argument("--lambdas", default=None)
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.threads is not None:
        for var in _THREAD_VARS:
            os.environ[var] = str(args.threads)
    from .errors import CapError, RangeError, ValidationError

    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RangeError, CapError, OverflowError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RANGE


if __name__ == "__main__":
    sys.exit(main())
