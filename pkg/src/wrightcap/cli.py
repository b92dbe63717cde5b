"""Command line driver: ``eigs``, ``validate {dde,psa,distance}`` and ``coeffs``.

Exit codes: 0 success, 10 census failure, 11 sweep failure, 12 resonance,
13 radii failure, 14 invalid configuration.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional

from . import bounds as bd
from .cheb import build_scheme
from .linalg import NotVerifiablyInvertible
from .manifold import (
    DEFAULT_XI_SCALE,
    ResonantIndex,
    build_approx_solution,
    check_nonresonance,
    make_problem,
    recurse_coeffs,
    xhat_sha256,
)
from .roots import RootValidationError, UnstableCountNotTwo, census_psa, find_dde_pair
from .seq import write_csv

EXIT_OK = 0
EXIT_CENSUS = 10
EXIT_SWEEP = 11
EXIT_RESONANCE = 12
EXIT_RADII = 13
EXIT_CONFIG = 14


class PipelineError(Exception):
    def __init__(self, code: int, check: str, message: str):
        super().__init__(message)
        self.code = code
        self.check = check


@dataclass
class RunConfig:
    alpha: float = 2.0
    n: int = 10
    trunc_N: int = 25
    tail_M: int = 1000
    xi_scale: float = DEFAULT_XI_SCALE
    epsilon: Optional[float] = None
    norm: str = "one"
    out_path: Optional[str] = None

    def check(self, needs_dde: bool) -> None:
        if not math.isfinite(self.alpha) or self.alpha <= 0:
            raise PipelineError(EXIT_CONFIG, "config", "alpha must be positive")
        if needs_dde and not (math.pi / 2 < self.alpha < 5 * math.pi / 2):
            raise PipelineError(EXIT_CONFIG, "config", "alpha outside (pi/2, 5 pi/2)")
        if self.n < 1:
            raise PipelineError(EXIT_CONFIG, "config", "n must be at least 1")
        if self.trunc_N < 2:
            raise PipelineError(EXIT_CONFIG, "config", "trunc must be at least 2")
        if self.tail_M <= self.trunc_N:
            raise PipelineError(EXIT_CONFIG, "config", "tail-m must exceed trunc")
        if not self.xi_scale > 0:
            raise PipelineError(EXIT_CONFIG, "config", "xi-scale must be positive")
        if self.norm not in ("one", "inf"):
            raise PipelineError(EXIT_CONFIG, "config", "norm must be 'one' or 'inf'")

    def as_json(self) -> dict:
        return {
            "alpha": repr(self.alpha),
            "n": self.n,
            "trunc_N": self.trunc_N,
            "tail_M": self.tail_M,
            "epsilon": None if self.epsilon is None else bd.decimal_down(self.epsilon),
            "xi_scale": repr(self.xi_scale),
            "norm": self.norm,
        }


# -- pipeline pieces ---------------------------------------------------------
def _dde_pair(cfg: RunConfig, cert: bd.ValidationCertificate):
    try:
        pair = find_dde_pair(cfg.alpha)
    except (RootValidationError, ValueError) as exc:
        cert.check("dde_eigenpair", False, str(exc))
        raise PipelineError(EXIT_CENSUS, "dde_eigenpair", str(exc)) from exc
    cert.check("dde_eigenpair", True)
    return pair


def _psa_census(cfg: RunConfig, cert: bd.ValidationCertificate):
    scheme = build_scheme(cfg.n, cfg.alpha)
    try:
        roots, pair = census_psa(scheme)
    except (RootValidationError, NotVerifiablyInvertible) as exc:
        cert.check("psa_census", False, str(exc))
        raise PipelineError(EXIT_CENSUS, "psa_census", str(exc)) from exc
    cert.check("psa_census", True, f"{len(roots)} disjoint roots, 2 unstable")
    return scheme, roots, pair


def _xhat(cfg: RunConfig, scheme, pair, cert):
    try:
        p = make_problem("psa", cfg.alpha, pair, scheme, cfg.xi_scale, 2 * cfg.trunc_N)
        check_nonresonance(p, 2 * cfg.trunc_N)
        x = recurse_coeffs(p, cfg.trunc_N)
    except NotVerifiablyInvertible as exc:
        cert.check("psa_multipliers", False, str(exc))
        raise PipelineError(EXIT_SWEEP, "psa_multipliers", str(exc)) from exc
    except ResonantIndex as exc:
        cert.check("nonresonance_psa", False, str(exc))
        raise PipelineError(EXIT_RESONANCE, "nonresonance_psa", str(exc)) from exc
    return p, x


def _radius(p, sol, tail, name, cert):
    try:
        v = bd.validate(p, sol, tail)
    except (bd.NoNegativePoint, ArithmeticError) as exc:
        cert.check(name, False, str(exc))
        raise PipelineError(EXIT_RADII, name, str(exc)) from exc
    cert.check(name, True, f"r = {bd.decimal_up(v.radius)}")
    return v


def run_validation(cfg: RunConfig, kind: str) -> bd.ValidationCertificate:
    """Run the pipeline; raises ``PipelineError`` with the certificate attached."""
    cert = bd.ValidationCertificate(config=cfg.as_json())
    try:
        _run(cfg, kind, cert)
    except PipelineError as exc:
        exc.certificate = cert
        raise
    return cert


def _run(cfg: RunConfig, kind: str, cert: bd.ValidationCertificate) -> None:
    needs_dde = kind in ("dde", "distance")
    needs_psa = kind in ("psa", "distance")
    try:
        cfg.check(needs_dde)
    except PipelineError:
        cert.check("config", False)
        raise
    cert.check("config", True)
    N, M = cfg.trunc_N, cfg.tail_M
    dde_pair = _dde_pair(cfg, cert) if needs_dde else None
    cert.lambda_dde = dde_pair
    scheme, _, psa_pair = _psa_census(cfg, cert)
    cert.lambda_psa = psa_pair
    p_psa, x = _xhat(cfg, scheme, psa_pair, cert)
    cert.check("nonresonance_psa", True)
    cert.xhat_sha256 = xhat_sha256(x)

    if needs_psa:
        try:
            tail = bd.invertibility_sweep(scheme, psa_pair, M, N, cfg.epsilon, cfg.norm)
        except (NotVerifiablyInvertible, bd.ThresholdViolated) as exc:
            cert.check("invertibility_sweep", False, str(exc))
            raise PipelineError(EXIT_SWEEP, "invertibility_sweep", str(exc)) from exc
        cert.config["epsilon"] = bd.decimal_down(tail.epsilon)
        cert.check(
            "invertibility_sweep", True,
            f"{tail.explicit_solves} verified solves; ||D|| <= {bd.decimal_up(tail.normD)}",
        )
        sol = build_approx_solution(p_psa, x, N)
        cert.psa = _radius(p_psa, sol, tail, "radii_psa", cert)

    if needs_dde:
        try:
            p_dde = make_problem("dde", cfg.alpha, dde_pair, None, cfg.xi_scale, 2 * N)
            check_nonresonance(p_dde, 2 * N)
        except ResonantIndex as exc:
            cert.check("nonresonance_dde", False, str(exc))
            raise PipelineError(EXIT_RESONANCE, "nonresonance_dde", str(exc)) from exc
        cert.check("nonresonance_dde", True)
        try:
            tail_d = bd.dde_tail(dde_pair, cfg.alpha, N)
        except bd.ThresholdViolated as exc:
            cert.check("dde_tail_threshold", False, str(exc))
            raise PipelineError(EXIT_RADII, "dde_tail_threshold", str(exc)) from exc
        cert.check("dde_tail_threshold", True)
        sol_d = build_approx_solution(p_dde, x, N)
        cert.dde = _radius(p_dde, sol_d, tail_d, "radii_dde", cert)

    if kind == "distance":
        try:
            cert.total = bd.distance_bound(cert.psa, cert.dde)
        except bd.MismatchedGuess as exc:
            cert.check("shared_xhat", False, str(exc))
            raise PipelineError(EXIT_RADII, "shared_xhat", str(exc)) from exc
        cert.check("shared_xhat", True)


# -- subcommands ---------------------------------------------------------------
def _emit(payload: dict, out: Optional[str]) -> None:
    text = json.dumps(payload, indent=2)
    if out:
        Path(out).write_text(text + "\n")
    print(text)


def _report(cert: bd.ValidationCertificate) -> None:
    for c in cert.checks:
        mark = "ok  " if c["passed"] else "FAIL"
        detail = f"  {c['detail']}" if c["detail"] else ""
        print(f"[{mark}] {c['name']}{detail}", file=sys.stderr)


def cmd_validate(cfg: RunConfig, kind: str) -> int:
    try:
        cert = run_validation(cfg, kind)
    except PipelineError as exc:
        cert = exc.certificate
        _report(cert)
        print(f"error: {exc}", file=sys.stderr)
        # failure records go to stdout only; no certificate file is written
        _emit(cert.to_json(), None)
        return exc.code
    _report(cert)
    _emit(cert.to_json(), cfg.out_path)
    return EXIT_OK


def cmd_eigs(cfg: RunConfig, with_psa: bool) -> int:
    """Validated unstable pair of the delay equation and, with ``--n``, the census."""
    out: dict = {"alpha": repr(cfg.alpha)}
    code = EXIT_OK
    try:
        cfg.check(needs_dde=True)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    try:
        out["lambda_dde"] = bd.pair_json(find_dde_pair(cfg.alpha))
    except (RootValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CENSUS
    if with_psa:
        scheme = build_scheme(cfg.n, cfg.alpha)
        out["n"] = cfg.n
        try:
            roots, pair = census_psa(scheme)
            out["roots_psa"] = [bd.rect_json(r.enclosure) for r in roots]
            out["unstable_psa"] = 2
            out["lambda_psa"] = bd.pair_json(pair)
        except UnstableCountNotTwo as exc:
            # a complete census with a different unstable count is a result, not a failure
            out["roots_psa"] = [bd.rect_json(r.enclosure) for r in exc.roots]
            out["unstable_psa"] = len(exc.unstable)
            out["note"] = str(exc)
            if len(exc.roots) != cfg.n + 1 or "touches" in str(exc):
                code = EXIT_CENSUS
        except (RootValidationError, NotVerifiablyInvertible) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_CENSUS
    _emit(out, cfg.out_path)
    return code


def cmd_coeffs(cfg: RunConfig, kind: str = "psa") -> int:
    """Write the approximate manifold coefficients as CSV."""
    cert = bd.ValidationCertificate(config=cfg.as_json())
    try:
        cfg.check(needs_dde=kind == "dde")
        if kind == "dde":
            pair, scheme = _dde_pair(cfg, cert), None
        else:
            scheme, _, pair = _psa_census(cfg, cert)
        p = make_problem(kind, cfg.alpha, pair, scheme, cfg.xi_scale, cfg.trunc_N)
        check_nonresonance(p, cfg.trunc_N)
        x = recurse_coeffs(p, cfg.trunc_N)
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except ResonantIndex as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RESONANCE
    except NotVerifiablyInvertible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SWEEP
    write_csv(x, cfg.out_path if cfg.out_path else sys.stdout)
    print(f"sha256 {xhat_sha256(x)}", file=sys.stderr)
    return EXIT_OK


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wrightcap", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, default_n=10):
        p.add_argument("--alpha", type=float, default=2.0)
        p.add_argument("--n", type=int, default=default_n)
        p.add_argument("--out", default=None)

    def pipeline(p):
        p.add_argument("--trunc", type=int, default=25, help="truncation degree N")
        p.add_argument("--tail-m", type=int, default=1000, help="sweep extent M")
        p.add_argument("--xi-scale", type=float, default=DEFAULT_XI_SCALE)

    e = sub.add_parser("eigs", help="validated unstable eigenvalues")
    common(e, default_n=None)

    v = sub.add_parser("validate", help="manifold validation")
    v.add_argument("kind", choices=["dde", "psa", "distance"])
    common(v)
    pipeline(v)
    v.add_argument("--epsilon", type=float, default=None)
    v.add_argument("--norm", choices=["one", "inf"], default="one")

    c = sub.add_parser("coeffs", help="approximate manifold coefficients as CSV")
    common(c)
    pipeline(c)
    c.add_argument("--kind", choices=["dde", "psa"], default="psa")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = _parser().parse_args(argv)
    cfg = RunConfig(
        alpha=args.alpha,
        n=args.n if args.n is not None else 10,
        trunc_N=getattr(args, "trunc", 25),
        tail_M=getattr(args, "tail_m", 1000),
        xi_scale=getattr(args, "xi_scale", DEFAULT_XI_SCALE),
        epsilon=getattr(args, "epsilon", None),
        norm=getattr(args, "norm", "one"),
        out_path=args.out,
    )
    if args.command == "eigs":
        return cmd_eigs(cfg, with_psa=args.n is not None)
    if args.command == "validate":
        return cmd_validate(cfg, args.kind)
    return cmd_coeffs(cfg, args.kind)


if __name__ == "__main__":
    sys.exit(main())
