"""Command line front end: triangles, verification, polynomials, bounds, Stirling diff.

Exit codes: 0 all good, 1 a mathematical check failed, 2 usage error,
3 I/O error.  Identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod

import mpmath

from . import bounds, numbers, oracle

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3

# Test hook: verification and rendering build triangles through this factory.
_TRIANGLE_FACTORY = numbers.triangle

__all__ = [
    "RunConfig", "main", "run_verification",
    "render_csv", "render_json", "render_plain", "parse_csv", "parse_json",
    "triangle_entries",
]


@dataclass
class RunConfig:
    command: str
    mask: numbers.Mask | None = None
    max_n: int = 1
    fmt: str = "plain"
    use_oracle: bool = False
    budget: int = oracle.DEFAULT_BUDGET
    subset_limit: int = numbers.DEFAULT_SUBSET_LIMIT
    zeros: bool = False
    kind: str = "rising"
    m1: tuple[int, ...] = ()
    out: str | None = None


# ---------------------------------------------------------------- rendering

def triangle_entries(tri: numbers.Triangle) -> list[tuple[int, int, int]]:
    """Stored entries as (n, m, value), ordered by n then m."""
    return [(n, m, v) for n in range(1, tri.max_n + 1)
            for m, v in sorted(tri.rows[n].items())]


def render_csv(entries) -> str:
    lines = ["n,m,value"]
    lines += [f"{n},{m},{v}" for n, m, v in entries]
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> list[tuple[int, int, int]]:
    lines = text.splitlines()
    if not lines or lines[0] != "n,m,value":
        raise ValueError("missing n,m,value header")
    out = []
    for line in lines[1:]:
        n, m, v = line.split(",")
        out.append((int(n), int(m), int(v)))
    return out


def render_json(tri: numbers.Triangle) -> str:
    payload = {
        "mask": str(tri.mask),
        "k": tri.mask.k,
        "rows": {str(n): {str(m): str(v) for m, v in sorted(tri.rows[n].items())}
                 for n in range(1, tri.max_n + 1)},
    }
    return json.dumps(payload, indent=2) + "\n"


def parse_json(text: str) -> numbers.Triangle:
    data = json.loads(text)
    mask = numbers.Mask.from_string(data["mask"])
    if data["k"] != mask.k:
        raise ValueError(f"k field {data['k']} does not match mask {data['mask']}")
    rows = {int(n): {int(m): int(v) for m, v in row.items()}
            for n, row in data["rows"].items()}
    return numbers.Triangle(mask, max(rows), rows)


def render_plain(tri: numbers.Triangle) -> str:
    lines = [f"mask {tri.mask} k {tri.mask.k}"]
    for n in range(1, tri.max_n + 1):
        cells = "  ".join(f"{m}:{v}" for m, v in sorted(tri.rows[n].items()))
        lines.append(f"n={n}  {cells}")
    return "\n".join(lines) + "\n"


def _fstr(x: Fraction, digits: int = 6) -> str:
    # Decimal preview of a possibly huge exact rational.
    with mpmath.workdps(digits + 10):
        return mpmath.nstr(mpmath.mpf(x.numerator) / mpmath.mpf(x.denominator), digits)


def _write(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# ------------------------------------------------------------- verification

def run_verification(mask: numbers.Mask, max_n: int, *, use_oracle: bool = False,
                     budget: int = oracle.DEFAULT_BUDGET,
                     subset_limit: int = numbers.DEFAULT_SUBSET_LIMIT):
    """Run every identity the package promises; returns (name, status, detail) rows."""
    comp = mask.complement()
    k = mask.k
    tri = _TRIANGLE_FACTORY(mask, max_n)
    results: list[tuple[str, str, str]] = []

    def check(name, ok, detail=""):
        results.append((name, "PASS" if ok else "FAIL", detail))

    check("row-sums",
          all(sum(tri.row(n).values()) == factorial(n) ** k for n in range(1, max_n + 1)),
          f"each row n <= {max_n} sums to (n!)^{k}")

    check("complement-symmetry",
          all(tri.value(n, m) == numbers.value(comp, n, n - m)
              for n in range(1, max_n + 1)
              for m in range(mask.offset - 1, n + mask.offset + 1)),
          "value(mask,n,m) == value(~mask,n,n-m)")

    check("support",
          all(min(tri.rows[n]) >= mask.offset and max(tri.rows[n]) <= n - 1 + mask.offset
              and all(v > 0 for v in tri.rows[n].values())
              for n in range(1, max_n + 1)),
          f"entries confined to [{mask.offset}, n-1+{mask.offset}], all positive")

    n_cap = min(max_n, subset_limit)
    check("explicit-sum",
          all(numbers.explicit_value(mask, n, m, subset_limit) == tri.value(n, m)
              for n in range(1, n_cap + 1) for m in mask.support(n)),
          f"subset expansion matches the recurrence for n <= {n_cap}")

    poly_ok = True
    for n in range(1, max_n + 1):
        up = numbers.rising_poly(mask, n)
        down = numbers.falling_poly(mask, n)
        for u in range(n + 1):
            want = tri.value(n, u + mask.offset - 1) if u >= 1 else 0
            poly_ok &= up.coefficients[u] == want
            poly_ok &= down.coefficients[u] == (-1) ** (n + u) * want
        for kind, poly in (("rising", up), ("falling", down)):
            for z in numbers.poly_zeros(mask, n, kind):
                if z is not None:
                    poly_ok &= poly(z) == 0
    check("polynomials", poly_ok, "coefficients, sign rule, exact zeros")

    js = range(2, max_n + 2)
    seq = [numbers.f_weight(j, mask) for j in js]
    weights_ok = all(a >= b for a, b in zip(seq, seq[1:]))
    weights_ok &= prod(seq, start=Fraction(1)) <= (max_n + 1) ** k
    weights_ok &= all(numbers.f_weight(j, mask) + numbers.f_weight(j, comp)
                      == Fraction(j, j - 1) ** k for j in js)
    weights_ok &= all(numbers.g_weight(j, mask) + numbers.g_weight(j, comp) == j ** k
                      for j in js)
    if mask.bits[0] == 1:
        weights_ok &= all(w >= 1 for w in seq)
    check("weights", weights_ok, "monotone in j, bounded product, complement sums")

    check("harmonic-dot",
          all(bounds.h_dot(n, mask)
              == sum((numbers.f_weight(j, mask) for j in range(2, n + 1)), Fraction(0))
              for n in range(1, max_n + 1)),
          "h_dot equals the f_weight partial sums")

    dom_ok = True
    for n in range(1, max_n + 1):
        row_ub = bounds.ocmax_row(mask, n)
        comp_ub = bounds.ocmax_row(comp, n)
        for m in mask.support(n):
            v = tri.value(n, m)
            dom_ok &= row_ub[m] >= v
            dom_ok &= v <= comp_ub[n - m]
    check("upper-bound-dominance", dom_ok,
          "ocmax covers every entry, complement cross-bound included")

    if max_n >= 2:
        rep = bounds.ratio_report(mask, max_n, (1, 2, 3))
        check("ratio-bounds",
              rep.ratio >= 1 and rep.ratio_ok and rep.ratio_prime_ok,
              f"ratio {_fstr(rep.ratio)} and primed {_fstr(rep.ratio_prime)} within e^lambda")
        side = "upper" if mask.bits[0] == 0 else "mirrored lower"
        check("tail-bounds", all(t.ok for t in rep.tails),
              f"{side} mass within e^-m1 for m1 in 1..3")

    if mask.bits == (0, 1):
        ref = numbers.stirling_ref(max_n)
        check("stirling-reference",
              all(tri.row(n) == ref[n] for n in range(1, max_n + 1)),
              f"rows 1..{max_n} identical to the classic recurrence")

    if use_oracle:
        checked: list[int] = []
        skipped: list[int] = []
        mismatch = None
        for n in range(1, max_n + 1):
            if factorial(n) ** k > budget:
                skipped.append(n)
                continue
            if oracle.histogram(mask, n, budget).counts != tri.row(n):
                mismatch = n
                break
            checked.append(n)
        if mismatch is not None:
            check("oracle", False, f"exhaustive histogram disagrees at n={mismatch}")
        elif checked:
            detail = f"exhaustive histograms match for n in {{{checked[0]}..{checked[-1]}}}"
            if skipped:
                detail += f"; warning: skipped n >= {skipped[0]} (budget {budget})"
            check("oracle", True, detail)
        else:
            results.append(("oracle", "SKIP",
                            f"warning: budget {budget} allows no row "
                            f"(n=1 already needs {factorial(1) ** k} tuples)"))
    return results


# ----------------------------------------------------------------- commands

def cmd_triangle(cfg: RunConfig) -> int:
    tri = _TRIANGLE_FACTORY(cfg.mask, cfg.max_n)
    if cfg.fmt == "csv":
        text = render_csv(triangle_entries(tri))
    elif cfg.fmt == "json":
        text = render_json(tri)
    else:
        text = render_plain(tri)
    _write(cfg.out, text)
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    results = run_verification(cfg.mask, cfg.max_n, use_oracle=cfg.use_oracle,
                               budget=cfg.budget, subset_limit=cfg.subset_limit)
    width = max(len(name) for name, _, _ in results)
    lines = [f"{status:<4} {name:<{width}}  {detail}".rstrip()
             for name, status, detail in results]
    failed = any(status == "FAIL" for _, status, _ in results)
    lines.append(f"result {'FAIL' if failed else 'OK'} (mask {cfg.mask}, n <= {cfg.max_n})")
    _write(cfg.out, "\n".join(lines) + "\n")
    return EXIT_CHECK_FAILED if failed else EXIT_OK


def cmd_poly(cfg: RunConfig) -> int:
    make = numbers.rising_poly if cfg.kind == "rising" else numbers.falling_poly
    poly = make(cfg.mask, cfg.max_n)
    lines = [f"mask {cfg.mask} n {cfg.max_n} kind {cfg.kind}",
             "coefficients " + ",".join(str(c) for c in poly.coefficients)]
    if cfg.zeros:
        zs = numbers.poly_zeros(cfg.mask, cfg.max_n, cfg.kind)
        lines.append("zeros " + ",".join("undef" if z is None else str(z) for z in zs))
    _write(cfg.out, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_bounds(cfg: RunConfig) -> int:
    mask, n = cfg.mask, cfg.max_n
    if n < 2:
        print("error: bounds reporting needs --n >= 2", file=sys.stderr)
        return EXIT_USAGE
    report = bounds.ratio_report(mask, n, cfg.m1 or (1, 2, 3))
    ok = True
    lines = [f"mask {mask} k {mask.k} n {n}",
             f"lambda {report.lam}",
             f"lambda_prime {report.lam_prime}"]
    for m in mask.support(n):
        ub = report.upper_bounds[m]
        v = numbers.value(mask, n, m)
        good = ub >= v
        ok &= good
        lines.append(f"m {m} ocmax {ub} value {v} dominance {'PASS' if good else 'FAIL'}")
    for t in report.tails:
        ok &= t.ok
        lines.append(f"tail m1 {t.m1} M {t.threshold} probability {t.probability} "
                     f"bound {t.bound!r} {'PASS' if t.ok else 'FAIL'}")
    ok &= report.ratio_ok and report.ratio_prime_ok
    lines.append(f"ratio {report.ratio} (~{_fstr(report.ratio)}) within e^lambda "
                 f"{'PASS' if report.ratio_ok else 'FAIL'}")
    lines.append(f"ratio_prime {report.ratio_prime} (~{_fstr(report.ratio_prime)}) "
                 f"within e^lambda_prime {'PASS' if report.ratio_prime_ok else 'FAIL'}")
    _write(cfg.out, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_stirling(cfg: RunConfig) -> int:
    n = cfg.max_n
    tri = _TRIANGLE_FACTORY(numbers.Mask.stirling(), n)
    ref = numbers.stirling_ref(n)
    lines = []
    clean = True
    for nn in range(1, n + 1):
        got, want = tri.row(nn), ref[nn]
        if got != want:
            clean = False
            for m in sorted(set(got) | set(want)):
                if got.get(m, 0) != want.get(m, 0):
                    lines.append(f"MISMATCH n={nn} m={m} "
                                 f"triangle={got.get(m, 0)} reference={want.get(m, 0)}")
    if clean:
        lines.append(f"OK: {n} rows identical")
    _write(cfg.out, "\n".join(lines) + "\n")
    return EXIT_OK if clean else EXIT_CHECK_FAILED


# ------------------------------------------------------------------ parsing

def _mask_arg(text: str) -> numbers.Mask:
    try:
        return numbers.Mask.from_string(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from exc
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def _m1_list(text: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated int list: {text!r}") from exc
    if any(v < 1 for v in values):
        raise argparse.ArgumentTypeError("every m1 must be >= 1")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="seqopt",
        description="Exact masked-record permutation triangles, bounds and checks.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, *, mask=True, n_default=None):
        if mask:
            sp.add_argument("--mask", type=_mask_arg, required=True,
                            help="bit string c0c1...ck, e.g. 01")
        if n_default is None:
            sp.add_argument("--n", type=_positive_int, required=True, dest="max_n")
        else:
            sp.add_argument("--n", type=_positive_int, default=n_default, dest="max_n")
        sp.add_argument("--out", default=None, help="write output to this path")

    sp = sub.add_parser("triangle", help="print rows 1..n of the triangle")
    common(sp, n_default=50)
    sp.add_argument("--format", choices=("csv", "json", "plain"), default="plain", dest="fmt")

    sp = sub.add_parser("verify", help="run every identity check, PASS/FAIL per line")
    common(sp, n_default=10)
    sp.add_argument("--oracle", action="store_true", dest="use_oracle",
                    help="also diff rows against the exhaustive enumeration")
    sp.add_argument("--budget", type=_positive_int, default=oracle.DEFAULT_BUDGET,
                    help="max permutation tuples the oracle may enumerate")
    sp.add_argument("--subset-limit", type=_positive_int,
                    default=numbers.DEFAULT_SUBSET_LIMIT,
                    help="cap for the explicit subset expansion")

    sp = sub.add_parser("poly", help="expand the generating product of row n")
    common(sp)
    sp.add_argument("--kind", choices=("rising", "falling"), default="rising")
    sp.add_argument("--zeros", action="store_true", help="append the exact roots")

    sp = sub.add_parser("bounds", help="upper bounds, tail and ratio report for row n")
    common(sp)
    sp.add_argument("--m1", type=_m1_list, default=(), help="comma-separated tail margins")

    sp = sub.add_parser("stirling", help="diff mask 01 against the classic recurrence")
    common(sp, mask=False, n_default=30)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command, max_n=args.max_n, out=args.out)
    for name in ("mask", "fmt", "use_oracle", "budget", "subset_limit", "zeros", "kind", "m1"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    return cfg


_HANDLERS = {
    "triangle": cmd_triangle,
    "verify": cmd_verify,
    "poly": cmd_poly,
    "bounds": cmd_bounds,
    "stirling": cmd_stirling,
}


def main(argv=None) -> int:
    # Output is exact decimal by design; entries at large n overflow the
    # interpreter's default int-to-str guard, so lift it for rendering.
    if hasattr(sys, "set_int_max_str_digits"):
        sys.set_int_max_str_digits(0)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    cfg = _config_from_args(args)
    try:
        return _HANDLERS[cfg.command](cfg)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
