"""Command-line front end: construct, export, verify and report."""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass

from . import __version__
from .cartan import canonical_frame
from .endo import indecomposability_test
from .ffla import GF, Subspace
from .liecore import LieError
from .rmod import character_module, hom_space, ideal_module, trivial_module
from .uea import induced_module
from .verify import (
    CHECK_IDS,
    MAX_ALGEBRA_N,
    MAX_MODULE_N,
    UnsupportedError,
    overall_status,
    report,
    report_json,
    run_checks,
    validate,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_EXTENSION = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class CliConfig:
    command: str
    n: int
    p: int = 2
    m: int | None = None
    seed: int = 0
    checks: list[str] | None = None
    export: str | None = None
    report: str | None = None
    mu: tuple[int, ...] | None = None
    timing: bool = False

    def validate(self) -> "CliConfig":
        if self.p != 2:
            raise UsageError(f"characteristic {self.p} is not supported (only p = 2)")
        limit = MAX_MODULE_N if self.command == "pim" else MAX_ALGEBRA_N
        if not 1 <= self.n <= limit:
            raise UsageError(f"unsupported size n = {self.n} (supported: 1..{limit})")
        if self.m is None:
            self.m = self.n
        if self.m < 1 or self.m % self.n:
            raise UsageError(f"field degree m = {self.m} must be a positive multiple of n = {self.n}")
        if self.mu is not None and len(self.mu) != self.n:
            raise UsageError(f"--mu needs {self.n} bits, got {len(self.mu)}")
        return self


def _parser() -> _Parser:
    ap = _Parser(prog="zassenhaus", description="Restricted Zassenhaus algebras in characteristic 2.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--p", type=int, default=2)
        sp.add_argument("--m", type=int, default=None, help="field degree (default n)")

    sp = sub.add_parser("algebra", help="build Wbar(1;n), print dims and labels")
    common(sp)
    sp.add_argument("--export", metavar="FILE")
    sp = sub.add_parser("frame", help="print s, t0 and the characters")
    common(sp)
    sp = sub.add_parser("verify", help="run the check registry")
    common(sp)
    sp.add_argument("--checks", help="comma-separated ids")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--report", metavar="FILE")
    sp.add_argument("--timing", action="store_true", help="include millis in the JSON report")
    sp = sub.add_parser("pim", help="build one P(mu) and test indecomposability")
    common(sp)
    sp.add_argument("--mu", required=True, help="character bits, e.g. 010")
    sp.add_argument("--seed", type=int, default=0)
    return ap


def parse_config(argv) -> CliConfig:
    ns = _parser().parse_args(argv)
    mu = None
    if getattr(ns, "mu", None) is not None:
        if not ns.mu or set(ns.mu) - {"0", "1"}:
            raise UsageError(f"--mu must be a bit string, got {ns.mu!r}")
        mu = tuple(int(c) for c in ns.mu)
    checks = None
    if getattr(ns, "checks", None):
        checks = [c.strip() for c in ns.checks.split(",") if c.strip()]
        unknown = [c for c in checks if c not in CHECK_IDS]
        if unknown:
            raise UsageError(f"unknown check id(s): {', '.join(unknown)}")
    return CliConfig(
        command=ns.command,
        n=ns.n,
        p=ns.p,
        m=ns.m,
        seed=getattr(ns, "seed", 0),
        checks=checks,
        export=getattr(ns, "export", None),
        report=getattr(ns, "report", None),
        mu=mu,
        timing=getattr(ns, "timing", False),
    ).validate()


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def cmd_algebra(cfg: CliConfig, out) -> int:
    F = canonical_frame(cfg.n, GF(2, cfg.m))
    W = F.wbar
    print(f"Wbar(1;{cfg.n}) over GF(2^{cfg.m}): dim {W.dim}", file=out)
    print(f"W(1;{cfg.n}): dim {len(F.witt)}, derived dim {len(F.derived)}", file=out)
    print("labels: " + " ".join(W.labels), file=out)
    if cfg.export:
        _write(cfg.export, json.dumps(W.to_json(), sort_keys=True, indent=1) + "\n")
        print(f"exported {cfg.export}", file=out)
    return EXIT_OK


def cmd_frame(cfg: CliConfig, out) -> int:
    F = canonical_frame(cfg.n, GF(2, cfg.m))
    js = F.to_json()
    one = F.ctx.coeff_string(1)

    def fmt(v: dict) -> str:
        return " + ".join(k if c == one else f"[{c}]{k}" for k, c in v.items()) or "0"

    print(f"s = {fmt(js['s'])}", file=out)
    for k, v in enumerate(js["s_powers"]):
        print(f"s^(2^{k}) = {fmt(v)}", file=out)
    print("t0 = span{ " + ", ".join(fmt(v) for v in js["t0"]) + " }", file=out)
    print("toral basis: " + ", ".join(fmt(v) for v in js["toral"]), file=out)
    print("B = span{ " + ", ".join(js["borel"]) + " }", file=out)
    print("characters: " + " ".join("".join(map(str, mu)) for mu in js["characters"]), file=out)
    return EXIT_OK


def cmd_verify(cfg: CliConfig, out) -> int:
    results = run_checks(cfg.n, m=cfg.m, ids=cfg.checks, seed=cfg.seed)
    for r in results:
        print(f"{r.id} {r.status} {r.millis}", file=out)
    if cfg.report:
        _write(cfg.report, report_json(report(results, cfg.n, cfg.m, cfg.seed, timing=cfg.timing)))
    return overall_status(results)


def cmd_pim(cfg: CliConfig, out) -> int:
    t = time.perf_counter()
    F = canonical_frame(cfg.n, GF(2, cfg.m))
    W = F.wbar
    T = F.t0_algebra()
    P = induced_module(W, T, character_module(T, cfg.mu))
    res = indecomposability_test(P, seed=cfg.seed)
    verdict = {"indecomposable": "Indecomposable", "decomposable": "Decomposable", "needs-extension": "NeedsExtension"}[res.status]
    Fm = trivial_module(W)
    L = ideal_module(W, Subspace.span(F.ctx, [W.basis_vector(i) for i in F.derived], W.dim))
    hf, hl = len(hom_space(P, Fm)), len(hom_space(P, L))
    head = "trivial" if (hf, hl) == (1, 0) else ("L" if hf == 0 and hl >= 1 else f"unresolved (Hom to F: {hf}, Hom to L: {hl})")
    print(f"dim {P.dim}, {verdict}, head = {head}", file=out)
    print(f"End dim {res.end_dim}, radical dim {res.certificate.get('radical_dim')}, {int((time.perf_counter() - t) * 1000)} ms", file=out)
    return {"indecomposable": EXIT_OK, "decomposable": EXIT_FAIL, "needs-extension": EXIT_EXTENSION}[res.status]


COMMANDS = {"algebra": cmd_algebra, "frame": cmd_frame, "verify": cmd_verify, "pim": cmd_pim}


def dispatch(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        cfg = parse_config(argv)
        if cfg.command == "verify":
            validate(cfg.n, cfg.m, cfg.checks)
        return COMMANDS[cfg.command](cfg, out)
    except (UsageError, UnsupportedError, LieError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None) -> int:
    code = dispatch(argv)
    sys.exit(code)


if __name__ == "__main__":
    main()
