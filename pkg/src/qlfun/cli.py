"""Command-line entry point.

One binary with a subcommand tree mirroring the library modules
(``qeuler``, ``lfun``, ``verify``).  Every invocation emits exactly one
output envelope: human-readable lines by default, or a single JSON object
with ``--json``.  Exit codes: 0 ok, 1 verification assertion failed,
2 usage, domain, or convergence error.
"""

from __future__ import annotations

import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Optional

import click

from . import verify as verify_mod
from .characters import CharacterError, parse_character
from .lfun import H_pq, K_full, K_partial, PartialZetaParams, T_full, T_partial, l_pq, lq_neg
from .numerics import INF, PadicNumber, QContext, SeriesResult, SeriesDivergenceError
from .qeuler import gen_euler_number, volkenborn_approx
from . import qeuler as qeuler_mod

DEFAULT_PRECISION = 8


def _default_precision() -> int:
    env = os.environ.get("QEULER_PREC")
    if env:
        try:
            return int(env)
        except ValueError:
            raise click.UsageError(f"QEULER_PREC must be an integer, got {env!r}")
    return DEFAULT_PRECISION


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.UsageError(f"cannot parse rational {text!r}: {exc}")


def _resolve_q(q: Optional[str], p: Optional[int]) -> Fraction:
    if q is not None:
        return parse_fraction(q)
    if p is not None:
        return Fraction(1 + p)
    raise click.UsageError("--q is required when --p is not given")


def _context(p: int, q: Optional[str], prec: Optional[int]) -> QContext:
    return QContext(p=p, q=_resolve_q(q, p),
                    precision=prec if prec is not None else _default_precision())


def fmt_fraction(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def at_target(result, ctx: QContext):
    """Report p-adic output mod p**precision; exact output passes through."""
    if isinstance(result, PadicNumber):
        return result.at_absolute_precision(ctx.precision)
    if isinstance(result, SeriesResult):
        return SeriesResult(value=result.value.at_absolute_precision(ctx.precision),
                            last_index=result.last_index,
                            tail_valuation_bound=result.tail_valuation_bound,
                            converged=result.converged)
    return result


def _encode(result):
    if isinstance(result, Fraction):
        return fmt_fraction(result)
    if isinstance(result, PadicNumber):
        return result.to_json_dict()
    if isinstance(result, SeriesResult):
        return result.to_json_dict()
    if isinstance(result, dict):
        return {k: _encode(v) for k, v in result.items()}
    if isinstance(result, (list, tuple)):
        return [_encode(v) for v in result]
    if result == INF:
        return "inf"
    return result


def emit(command: str, params: dict, result, status: str,
         started: float, as_json: bool) -> None:
    """Emit the single output envelope for this invocation."""
    envelope = {
        "command": command,
        "params": _encode(params),
        "result": _encode(result),
        "status": status,
        "elapsed_ms": int((time.monotonic() - started) * 1000),
    }
    if as_json:
        click.echo(json.dumps(envelope, sort_keys=True, separators=(",", ":")))
    else:
        click.echo(f"command: {command}")
        for key, value in envelope["params"].items():
            click.echo(f"  {key}: {value}")
        click.echo(f"status: {status}")
        click.echo(f"result: {json.dumps(envelope['result'], sort_keys=True, default=str)}")


EXIT_CODES = {"ok": 0, "assertion_failed": 1, "error": 2}


def run_command(command: str, params: dict, as_json: bool, fn) -> None:
    """Execute a leaf command body, emit the envelope, and exit accordingly."""
    started = time.monotonic()
    try:
        result, status = fn()
    except SeriesDivergenceError as exc:
        emit(command, params, {"message": str(exc),
                               "partial": exc.partial.to_json_dict()},
             "error", started, as_json)
        sys.exit(2)
    except (ValueError, ZeroDivisionError, CharacterError) as exc:
        emit(command, params, {"message": str(exc)}, "error", started, as_json)
        sys.exit(2)
    emit(command, params, result, status, started, as_json)
    sys.exit(EXIT_CODES[status])


def json_option(fn):
    return click.option("--json", "as_json", is_flag=True,
                        help="emit a single JSON envelope")(fn)


@click.group()
def main() -> None:
    """Exact q-Euler numbers, q-l-values, and p-adic q-l-functions."""


# ---------------------------------------------------------------------------
# qeuler
# ---------------------------------------------------------------------------

@main.group()
def qeuler() -> None:
    """q-Euler numbers and polynomials (exact rational arithmetic)."""


@qeuler.command("number")
@click.option("-m", type=int, required=True)
@click.option("--q", "q", type=str, required=True)
@json_option
def qeuler_number(m: int, q: str, as_json: bool) -> None:
    params = {"m": m, "q": q}
    run_command("qeuler number", params, as_json,
                lambda: (qeuler_mod.euler_number(m, parse_fraction(q)), "ok"))


@qeuler.command("poly")
@click.option("-n", type=int, required=True)
@click.option("-x", type=int, required=True)
@click.option("--q", "q", type=str, required=True)
@json_option
def qeuler_poly(n: int, x: int, q: str, as_json: bool) -> None:
    params = {"n": n, "x": x, "q": q}
    run_command("qeuler poly", params, as_json,
                lambda: (qeuler_mod.euler_poly(n, x, parse_fraction(q)), "ok"))


@qeuler.command("gen")
@click.option("-n", type=int, required=True)
@click.option("--chi", type=str, required=True)
@click.option("--p", type=int, default=None)
@click.option("--q", "q", type=str, default=None)
@click.option("--prec", type=int, default=None)
@json_option
def qeuler_gen(n: int, chi: str, p: Optional[int], q: Optional[str],
               prec: Optional[int], as_json: bool) -> None:
    params = {"n": n, "chi": chi, "p": p, "q": q, "prec": prec}

    def body():
        character = parse_character(chi, p)
        if character.is_plus_minus_one_valued:
            return gen_euler_number(n, character, q=_resolve_q(q, p)), "ok"
        if p is None:
            raise click.UsageError("--p is required for p-adic-valued characters")
        ctx = _context(p, q, prec)
        return at_target(gen_euler_number(n, character, ctx=ctx), ctx), "ok"

    run_command("qeuler gen", params, as_json, body)


@qeuler.command("volkenborn")
@click.option("-m", type=int, required=True)
@click.option("--level", type=int, required=True)
@click.option("--p", type=int, required=True)
@click.option("--q", "q", type=str, default=None)
@json_option
def qeuler_volkenborn(m: int, level: int, p: int, q: Optional[str], as_json: bool) -> None:
    params = {"m": m, "level": level, "p": p, "q": q}
    run_command("qeuler volkenborn", params, as_json,
                lambda: (volkenborn_approx(m, level, _context(p, q, None)), "ok"))


# ---------------------------------------------------------------------------
# lfun
# ---------------------------------------------------------------------------

@main.group()
def lfun() -> None:
    """q-l-values at negative integers and their p-adic interpolations."""


@lfun.command("lq")
@click.option("-k", type=int, required=True)
@click.option("--chi", type=str, default="trivial")
@click.option("--q", "q", type=str, default=None)
@click.option("--p", type=int, default=None)
@click.option("--prec", type=int, default=None)
@json_option
def lfun_lq(k: int, chi: str, q: Optional[str], p: Optional[int],
            prec: Optional[int], as_json: bool) -> None:
    params = {"k": k, "chi": chi, "q": q, "p": p, "prec": prec}

    def body():
        character = parse_character(chi, p)
        if character.is_plus_minus_one_valued:
            return lq_neg(k, character, q=_resolve_q(q, p)), "ok"
        if p is None:
            raise click.UsageError("--p is required for p-adic-valued characters")
        ctx = _context(p, q, prec)
        return at_target(lq_neg(k, character, ctx=ctx), ctx), "ok"

    run_command("lfun lq", params, as_json, body)


@lfun.command("lpq")
@click.option("-s", type=int, required=True)
@click.option("--chi", type=str, default="trivial")
@click.option("--p", type=int, required=True)
@click.option("--q", "q", type=str, default=None)
@click.option("--prec", type=int, default=None)
@click.option("--modulus", "-F", "modulus", type=int, default=None,
              help="odd multiple of p (default p * conductor)")
@json_option
def lfun_lpq(s: int, chi: str, p: int, q: Optional[str], prec: Optional[int],
             modulus: Optional[int], as_json: bool) -> None:
    params = {"s": s, "chi": chi, "p": p, "q": q, "prec": prec, "modulus": modulus}

    def body():
        ctx = _context(p, q, prec)
        character = parse_character(chi, p)
        return at_target(l_pq(s, character, ctx, F=modulus), ctx), "ok"

    run_command("lfun lpq", params, as_json, body)


@lfun.command("hpq")
@click.option("-s", type=int, required=True)
@click.option("-a", type=int, required=True)
@click.option("-F", "--modulus", "modulus", type=int, required=True)
@click.option("--p", type=int, required=True)
@click.option("--q", "q", type=str, default=None)
@click.option("--prec", type=int, default=None)
@json_option
def lfun_hpq(s: int, a: int, modulus: int, p: int, q: Optional[str],
             prec: Optional[int], as_json: bool) -> None:
    params = {"s": s, "a": a, "F": modulus, "p": p, "q": q, "prec": prec}

    def body():
        ctx = _context(p, q, prec)
        return at_target(H_pq(s, PartialZetaParams(a, modulus), ctx), ctx), "ok"

    run_command("lfun hpq", params, as_json, body)


@lfun.command("tk")
@click.option("-n", type=int, required=True)
@click.option("-s", type=int, required=True)
@click.option("-a", type=int, default=None)
@click.option("-F", "--modulus", "modulus", type=int, default=None)
@click.option("--chi", type=str, default=None)
@click.option("--p", type=int, required=True)
@click.option("--q", "q", type=str, default=None)
@click.option("--prec", type=int, default=None)
@json_option
def lfun_tk(n: int, s: int, a: Optional[int], modulus: Optional[int],
            chi: Optional[str], p: int, q: Optional[str],
            prec: Optional[int], as_json: bool) -> None:
    """Boundary (T) and correction (K) series, partial (-a/-F) or full (--chi)."""
    params = {"n": n, "s": s, "a": a, "F": modulus, "chi": chi,
              "p": p, "q": q, "prec": prec}

    def body():
        ctx = _context(p, q, prec)
        if a is not None:
            prm = PartialZetaParams(a, modulus if modulus is not None else p)
            return {"T": at_target(T_partial(n, s, prm, ctx), ctx),
                    "K": at_target(K_partial(n, s, prm, ctx), ctx)}, "ok"
        character = parse_character(chi if chi is not None else "trivial", p)
        return {"T": at_target(T_full(n, s, character, ctx), ctx),
                "K": at_target(K_full(n, s, character, ctx), ctx)}, "ok"

    run_command("lfun tk", params, as_json, body)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

@main.group()
def verify() -> None:
    """Verification suites; exit 0 only if all asserted invariants hold."""


def _thm5_point(args) -> dict:
    p, q_text, n, r, prec = args
    ctx = QContext(p=p, q=Fraction(q_text), precision=prec)
    report = verify_mod.thm5_report(n, r, ctx)
    out = report.to_json_dict()
    out["n"] = n
    out["r"] = r
    out["p"] = p
    out["passes"] = report.passes(prec)
    return out


@verify.command("thm5")
@click.option("--p", type=int, required=True)
@click.option("--q", "q", type=str, default=None)
@click.option("-n", "n_list", type=str, required=True, help="value or comma list")
@click.option("-r", "r_list", type=str, required=True, help="value or comma list")
@click.option("--prec", type=int, default=None)
@click.option("--jobs", type=int, default=1)
@json_option
def verify_thm5(p: int, q: Optional[str], n_list: str, r_list: str,
                prec: Optional[int], jobs: int, as_json: bool) -> None:
    params = {"p": p, "q": q, "n": n_list, "r": r_list, "prec": prec, "jobs": jobs}

    def body():
        precision = prec if prec is not None else _default_precision()
        q_frac = _resolve_q(q, p)
        q_text = f"{q_frac.numerator}/{q_frac.denominator}"
        points = [(p, q_text, n, r)
                  for n in _int_list(n_list) for r in _int_list(r_list)]
        work = [(pp, qq, n, r, precision) for pp, qq, n, r in points]
        if jobs > 1 and len(work) > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                reports = list(pool.map(_thm5_point, work))
        else:
            reports = [_thm5_point(w) for w in work]
        result = reports[0] if len(reports) == 1 else reports
        ok = all(rep["passes"] for rep in reports)
        return result, "ok" if ok else "assertion_failed"

    run_command("verify thm5", params, as_json, body)


def _int_list(text: str) -> list:
    return [int(tok) for tok in text.split(",") if tok.strip()]


@verify.command("congruences")
@click.option("--p", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.option("--s", "s_list", type=str, required=True, help="comma list of integers")
@click.option("--q", "q", type=str, default=None)
@click.option("--prec", type=int, default=None)
@json_option
def verify_congruences(p: int, t: int, s_list: str, q: Optional[str],
                       prec: Optional[int], as_json: bool) -> None:
    params = {"p": p, "t": t, "s": s_list, "q": q, "prec": prec}

    def body():
        ctx = _context(p, q, prec)
        return verify_mod.congruence_scan_eq21(t, _int_list(s_list), ctx), "ok"

    run_command("verify congruences", params, as_json, body)


@verify.command("remark")
@click.option("--p", type=int, required=True)
@click.option("--q", "q", type=str, required=True)
@json_option
def verify_remark(p: int, q: str, as_json: bool) -> None:
    params = {"p": p, "q": q}

    def body():
        ok = verify_mod.remark_check(p, parse_fraction(q))
        return {"holds": ok}, "ok" if ok else "assertion_failed"

    run_command("verify remark", params, as_json, body)


@verify.command("identities")
@json_option
def verify_identities(as_json: bool) -> None:
    """Exact identity suite: dual-path polynomial values, the
    multiplication-by-m relation, power-sum closed forms (with the
    misprinted-variant regression pinned), the inverse power-sum identity,
    and the binomial coefficient identities."""
    params: dict = {}

    def body():
        sample_qs = [Fraction(2), Fraction(1, 2), Fraction(4),
                     Fraction(1 + 3), Fraction(1 + 5)]
        checks = {}
        checks["poly_paths_agree"] = all(
            qeuler_mod.euler_poly(n, x, qq) == qeuler_mod.euler_poly_moments(n, x, qq)
            for qq in sample_qs for n in range(9) for x in range(7))
        checks["distribution_relation"] = all(
            qeuler_mod.euler_poly(n, x, qq) == qeuler_mod.distribution_sum(n, x, m, qq)
            for qq in sample_qs for m in (1, 3, 5) for n in range(7) for x in range(4))
        checks["power_sum_closed_form"] = all(
            qeuler_mod.alt_power_sum_brute(n, m, qq) == qeuler_mod.alt_power_sum_closed(n, m, qq)
            for qq in sample_qs for n in range(1, 9) for m in range(1, 7))
        checks["misprint_regression"] = (
            verify_mod.alt_power_sum_misprinted(2, 1, Fraction(2)) == Fraction(-7)
            and qeuler_mod.alt_power_sum_brute(2, 1, Fraction(2)) == Fraction(-2))
        checks["inverse_power_sum"] = all(
            verify_mod.remark_check(pp, qq)
            for pp in (3, 5, 7) for qq in (Fraction(2), Fraction(5), Fraction(7, 3)))
        checks["binomial_identities"] = verify_mod.binom_identities_check(
            range(1, 9), range(7), range(7))
        ok = all(checks.values())
        return checks, "ok" if ok else "assertion_failed"

    run_command("verify identities", params, as_json, body)


@verify.command("limits")
@click.option("--p", "p_list", type=str, default="3,5")
@click.option("--m-max", type=int, default=4)
@click.option("--k-max", type=int, default=5)
@json_option
def verify_limits(p_list: str, m_max: int, k_max: int, as_json: bool) -> None:
    """Classical-limit checks against the Bernoulli-number oracle."""
    params = {"p": p_list, "m_max": m_max, "k_max": k_max}

    def body():
        reports = [verify_mod.classical_limit_check(m_max, pp, list(range(1, k_max + 1)))
                   for pp in _int_list(p_list)]
        ok = all(rep["ok"] for rep in reports)
        return reports, "ok" if ok else "assertion_failed"

    run_command("verify limits", params, as_json, body)


if __name__ == "__main__":
    main()
