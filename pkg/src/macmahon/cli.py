"""Command-line front end.

    macmahon verify --theorem mmt --n 2 --order 4 --json
    macmahon verify --all --n 1 --n-prime 1 --order 2
    macmahon verify --theorem subder --n 3 --n-prime 2 --order 8 --mode modular --seeds 20
    macmahon eval --matrix m.json --variant pperm_btp
    macmahon sequences --kind d --rmax 7
    macmahon explain --n 2 --N 3 --kind partial

Exit status is 0 iff every emitted report (or sequence check) matches, 1 on a
mismatch and 2 on invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from typing import Iterator, List, Optional

from . import genfunc, graphs, modular, permanents, theorems
from .theorems import VerificationReport

SELECTORS = ("mmt", "sub", "pperm", "subpperm", "der", "subder", "remark", "lemma",
             "prop1", "oracle", "trace", "all")

SELECTOR_IDS = {
    "mmt": "MMT", "sub": "SubMMT", "pperm": "PPermMMT", "subpperm": "SubPPermMMT",
    "der": "DerMMT", "subder": "SubDerMMT", "remark": "Remark", "lemma": "Lemma",
    "prop1": "Proposition1", "oracle": "GraphOracle", "trace": "TraceIdentity",
}

DEFAULT_MODULUS = 10**9 + 7


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    theorem: str = "mmt"
    n: int = 1
    n_prime: int = 1
    order: int = 2
    mode: str = "symbolic"
    modulus: int = DEFAULT_MODULUS
    seed: int = 0
    seeds: int = 1
    kind: Optional[str] = None
    output: str = "text"
    out_path: Optional[str] = None
    matrix_path: Optional[str] = None
    variant: str = "perm"
    rmax: int = 7
    deterministic: bool = False
    corrupt: bool = False

    def validate(self) -> None:
        if self.n < 1:
            raise UsageError("--n must be at least 1")
        if self.n_prime < 1:
            raise UsageError("--n-prime must be at least 1")
        if self.order < 0:
            raise UsageError("--order must be non-negative")
        if self.command == "verify" and self.mode == "modular":
            try:
                modular.check_modulus(self.modulus, self.order)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
            if self.seeds < 1:
                raise UsageError("--seeds must be at least 1")


def _symbolic_reports(cfg: RunConfig, selector: str) -> Iterator[VerificationReport]:
    n, np_, order = cfg.n, cfg.n_prime, cfg.order
    if selector == "mmt":
        yield theorems.verify_mmt(n, order)
    elif selector == "sub":
        yield theorems.verify_submatrix_mmt(np_, n, order)
    elif selector == "pperm":
        yield theorems.verify_pperm_mmt(n, order)
    elif selector == "subpperm":
        yield theorems.verify_sub_pperm_mmt(np_, n, order)
    elif selector == "der":
        yield theorems.verify_derangement_mmt(n, order)
    elif selector == "subder":
        yield theorems.verify_sub_derangement_mmt(np_, n, order)
    elif selector == "remark":
        yield theorems.verify_remark_beta_minus1(n)
    elif selector == "lemma":
        yield theorems.verify_lemma_beta_minus1(np_, n)
    elif selector == "prop1":
        yield theorems.verify_proposition1(n, max(order, 1))
    elif selector == "oracle":
        for kind in ([cfg.kind] if cfg.kind else graphs.KINDS):
            yield theorems.verify_graph_oracle(n, order, kind)
    elif selector == "trace":
        yield theorems.verify_trace_identity(n, max(order, 1))


def _modular_reports(cfg: RunConfig, selector: str) -> Iterator[VerificationReport]:
    tid = SELECTOR_IDS[selector]
    for k in range(cfg.seeds):
        yield modular.modular_verify(tid, cfg.n, cfg.n_prime, cfg.order, cfg.modulus,
                                     cfg.seed + k, corrupt=cfg.corrupt)


def selected(cfg: RunConfig) -> List[str]:
    if cfg.theorem != "all":
        if cfg.mode == "modular" and SELECTOR_IDS[cfg.theorem] not in modular.MODULAR_THEOREMS:
            raise UsageError(f"theorem {cfg.theorem} has no modular check")
        return [cfg.theorem]
    names = [s for s in SELECTORS if s != "all"]
    if cfg.mode == "modular":
        names = [s for s in names if SELECTOR_IDS[s] in modular.MODULAR_THEOREMS]
    return names


def verify_reports(cfg: RunConfig) -> Iterator[VerificationReport]:
    gen = _modular_reports if cfg.mode == "modular" else _symbolic_reports
    for name in selected(cfg):
        for report in gen(cfg, name):
            if cfg.deterministic:
                report.elapsed_ms = 0
            yield report


def _emit(lines: List[str], cfg: RunConfig, stream) -> None:
    text = "\n".join(lines) + ("\n" if lines else "")
    if cfg.out_path:
        with open(cfg.out_path, "w") as fh:
            fh.write(text)
    else:
        stream.write(text)


def run(cfg: RunConfig, stdout=None) -> int:
    stdout = stdout or sys.stdout
    cfg.validate()
    as_json = cfg.output == "json"
    lines: List[str] = []
    ok = True

    if cfg.command == "verify":
        for report in verify_reports(cfg):
            ok &= report.match
            line = json.dumps(report.to_json()) if as_json else report.text()
            if cfg.out_path:
                lines.append(line)
            else:
                stdout.write(line + "\n")
                stdout.flush()

    elif cfg.command == "eval":
        if not cfg.matrix_path:
            raise UsageError("eval needs --matrix")
        try:
            with open(cfg.matrix_path) as fh:
                M = permanents.matrix_from_json(json.load(fh))
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read matrix file {cfg.matrix_path}: {exc}") from None
        fn = {
            "perm": permanents.perm_beta,
            "pperm": permanents.pperm,
            "pperm_btp": permanents.pperm_btp,
            "dperm": permanents.dperm_beta,
            "det": permanents.det,
        }[cfg.variant]
        result = fn(M)
        lines.append(json.dumps({"variant": cfg.variant, "n": M.dim, "result": str(result)})
                     if as_json else str(result))

    elif cfg.command == "sequences":
        kind = cfg.kind or "d"
        if kind not in ("p", "d"):
            raise UsageError("--kind must be p or d for sequences")
        table = genfunc.p_sequence(cfg.rmax) if kind == "p" else genfunc.d_sequence(cfg.rmax)
        egf = genfunc.p_egf(cfg.rmax) if kind == "p" else genfunc.d_egf(cfg.rmax)
        ok = genfunc.egf_rows(egf, cfg.rmax) == [p for _, p in table.rows]
        if as_json:
            obj = table.to_json()
            obj["egf_match"] = ok
            lines.append(json.dumps(obj))
        else:
            lines.append(table.text())
            lines.append(f"EGF check: {'MATCH' if ok else 'MISMATCH'}")

    elif cfg.command == "explain":
        kind = cfg.kind or "full"
        if kind not in graphs.KINDS:
            raise UsageError(f"--kind must be one of {', '.join(graphs.KINDS)} for explain")
        for cls in graphs.enumerate_classes(cfg.n, cfg.order, kind):
            if as_json:
                lines.append(json.dumps(cls.to_json()))
            else:
                comps = " ".join(
                    f"{kind_}{list(labs)}" + (f"^{m}" if m > 1 else "")
                    for (kind_, labs), m in cls.multiplicities())
                lines.append(f"|Aut|={cls.aut_order:<4} weight={cls.weight}  {comps}")

    if lines or cfg.out_path:
        _emit(lines, cfg, stdout)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="macmahon", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--n", type=int, default=1)
        p.add_argument("--json", action="store_true", help="emit JSON lines")
        p.add_argument("--out", help="write output to this path")

    v = sub.add_parser("verify", help="check identities")
    common(v)
    v.add_argument("--theorem", choices=SELECTORS, default="mmt")
    v.add_argument("--all", action="store_true", help="same as --theorem all")
    v.add_argument("--n-prime", type=int, default=1)
    v.add_argument("--order", type=int, default=2)
    v.add_argument("--mode", choices=("symbolic", "modular"), default="symbolic")
    v.add_argument("--modulus", type=int, default=DEFAULT_MODULUS)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds (modular)")
    v.add_argument("--kind", choices=graphs.KINDS, help="graph kind for the oracle check")
    v.add_argument("--deterministic", action="store_true", help="report elapsed_ms as 0")

    e = sub.add_parser("eval", help="evaluate a permanent variant of a JSON matrix")
    common(e)
    e.add_argument("--matrix", required=True)
    e.add_argument("--variant", choices=("perm", "pperm", "pperm_btp", "dperm", "det"), default="perm")

    s = sub.add_parser("sequences", help="p_r(alpha,beta) or d_r(beta) tables")
    common(s)
    s.add_argument("--kind", choices=("p", "d"), default="d")
    s.add_argument("--rmax", type=int, default=7)

    x = sub.add_parser("explain", help="graph-class decomposition for (n, N, kind)")
    common(x)
    x.add_argument("--N", type=int, default=2, dest="size")
    x.add_argument("--kind", choices=graphs.KINDS, default="full")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(command=args.command, n=args.n, output="json" if args.json else "text",
                    out_path=args.out)
    if args.command == "verify":
        cfg.theorem = "all" if args.all else args.theorem
        cfg.n_prime, cfg.order, cfg.mode = args.n_prime, args.order, args.mode
        cfg.modulus, cfg.seed, cfg.seeds = args.modulus, args.seed, args.seeds
        cfg.kind, cfg.deterministic = args.kind, args.deterministic
    elif args.command == "eval":
        cfg.matrix_path, cfg.variant = args.matrix, args.variant
    elif args.command == "sequences":
        cfg.kind, cfg.rmax = args.kind, args.rmax
        if cfg.rmax < 0:
            raise UsageError("--rmax must be non-negative")
    elif args.command == "explain":
        cfg.kind, cfg.order = args.kind, args.size
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(config_from_args(args))
    except UsageError as exc:
        print(f"macmahon: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
