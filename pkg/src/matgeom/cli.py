"""Command-line entry point.

Exit codes: 0 success, 1 verification failure (or Unsat for ``search``),
2 domain error (or BudgetExceeded for ``search``), 64 usage error, 74 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from . import canon, config, harness
from .classify import classify
from .errors import MatGeomError, ShapeMismatch
from .fields import FieldSpec, enumerate_field_homs, gf
from .geometry import all_maximal_sets, graph_export, maximal_sets_through
from .maptable import MapTable
from .matrices import (
    Mat,
    distance,
    g_inverse,
    inverse,
    minus_le,
    normal_form,
    rank,
)
from .search import (
    BudgetExceeded,
    Found,
    SearchBudgetExceeded,
    SearchProblem,
    Unsat,
    enumerate_homs,
    sample_homs,
    search_hom,
)

EX_USAGE, EX_IOERR, EX_DOMAIN, EX_FAIL = 64, 74, 2, 1


class UsageError(Exception):
    pass


class ReadError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- argument helpers ------------------------------------------------------------

def _field(tokens) -> FieldSpec:
    return FieldSpec.parse(tokens)


def _shape(text: str) -> tuple[int, int]:
    try:
        m, n = (int(t) for t in text.replace("x", ",").split(","))
    except ValueError:
        raise UsageError(f"bad shape {text!r}, expected m,n") from None
    if m < 1 or n < 1:
        raise UsageError(f"bad shape {text!r}")
    return m, n


def _matrix(F: FieldSpec, text: str, shape: tuple[int, int] | None = None) -> Mat:
    """``m x n:csv``, or a bare csv with the given (or a square) shape."""
    if ":" in text:
        dims, text = text.split(":", 1)
        shape = _shape(dims)
    entries = [int(t) for t in text.split(",") if t.strip()]
    if shape is None:
        n = math.isqrt(len(entries))
        if n * n != len(entries):
            raise ShapeMismatch(f"{len(entries)} entries do not form a square matrix; give m x n:csv")
        shape = (n, n)
    if any(not 0 <= e < F.q for e in entries):
        raise MatGeomError(f"entry outside GF({F.q})")
    return Mat(F, shape[0], shape[1], tuple(entries))


def _tau(text: str):
    """``src>dst:i`` picks the i-th homomorphism GF(src) -> GF(dst) in enumeration order."""
    try:
        pair, _, idx = text.partition(":")
        a, b = (int(t) for t in pair.split(">"))
        i = int(idx or 0)
    except ValueError:
        raise UsageError(f"bad --tau {text!r}, expected src>dst:i") from None
    homs = enumerate_field_homs(gf(a), gf(b))
    if not 0 <= i < len(homs):
        raise MatGeomError(f"GF({a}) -> GF({b}) has {len(homs)} homomorphisms, index {i} is out of range")
    return homs[i]


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


# -- subcommands --------------------------------------------------------------------

def _split_operands(tokens: list[str]) -> tuple[list[str], list[str]]:
    """``--field`` is greedy, so bare integers after the field description are operands."""
    keep = 1 if tokens and "=" not in tokens[0] and tokens[0] != "field" else 0
    while keep < len(tokens) and ("=" in tokens[keep] or tokens[keep] == "field"):
        keep += 1
    return tokens[:keep], tokens[keep:]


def cmd_field(a) -> int:
    tokens, extra = _split_operands(a.field)
    F = _field(tokens)
    a.args = list(a.args) + extra
    if a.op == "info":
        print(F.to_text())
        print(f"order {F.q}")
        return 0
    if a.op == "homs":
        dst = _field(a.dst)
        homs = enumerate_field_homs(F, dst)
        print(f"count {len(homs)}")
        for h in homs:
            print("hom " + ",".join(map(str, h.table)))
        return 0
    args = [int(x) for x in a.args]
    arity = {"add": 2, "sub": 2, "mul": 2, "div": 2, "pow": 2, "neg": 1, "inv": 1}[a.op]
    if len(args) != arity:
        raise UsageError(f"field {a.op} takes {arity} operands")
    if any(not 0 <= x < F.q for x in args[: 1 if a.op == "pow" else arity]):
        raise MatGeomError(f"operand outside GF({F.q})")
    if a.op == "div":
        r = F.mul(args[0], F.inv(args[1]))
    elif a.op == "pow":
        r = F.pow(args[0], args[1])
    else:
        r = getattr(F, a.op)(*args)
    print(r)
    return 0


def cmd_mat(a) -> int:
    F = _field(a.field)
    shape = _shape(a.shape) if a.shape else None
    A = _matrix(F, a.entries, shape)
    if a.op == "rank":
        print(rank(A))
    elif a.op == "inverse":
        print(inverse(A).to_csv())
    elif a.op == "normal-form":
        P, Q, r = normal_form(A)
        print(f"rank {r}\nP {P.to_csv()}\nQ {Q.to_csv()}")
    elif a.op == "g-inverse":
        print(g_inverse(A).to_csv())
    else:
        if a.other is None:
            raise UsageError(f"mat {a.op} needs --other")
        B = _matrix(F, a.other, A.shape)
        print(distance(A, B) if a.op == "distance" else str(minus_le(A, B)).lower())
    return 0


def cmd_graph(a) -> int:
    F = _field(a.field)
    m, n = _shape(a.shape)
    _write(graph_export(F, m, n, a.format), a.out)
    return 0


def cmd_cliques(a) -> int:
    F = _field(a.field)
    m, n = _shape(a.shape)
    sets = maximal_sets_through(_matrix(F, a.through, (m, n))) if a.through else all_maximal_sets(F, m, n)
    _write("".join(M.describe() + "\n" for M in sets), a.out)
    return 0


def cmd_construct(a) -> int:
    if a.form == "colouring":
        src, dst = _field(a.src_field), _field(a.dst_field)
        m, n = _shape(a.shape)
        dm, dn = _shape(a.dst_shape) if a.dst_shape else (m, n)
        table = canon.make_colouring(src, m, n, canon.colour_target(dst, dm, dn))
    else:
        if a.tau is None or a.P is None or a.Q is None:
            raise UsageError("construct needs --tau, --P and --Q")
        tau = _tau(a.tau)
        F = tau.dst
        P, Q = _matrix(F, a.P), _matrix(F, a.Q)
        transpose = a.form.endswith("-t") or a.form == "transpose"
        if a.form in ("standard", "transpose"):
            form = canon.additive(P, tau, Q, transpose=transpose)
        else:
            if a.L is None:
                raise UsageError(f"--form {a.form} needs --L")
            L = _matrix(F, a.L)
            if a.form.startswith("shifted"):
                if a.A0 is None or a.offset is None:
                    raise UsageError("shifted forms need --A0 and --offset")
                A0 = _matrix(tau.src, a.A0, (L.n, L.n))
                off = _matrix(F, a.offset, (P.m, Q.n))
                form = canon.shifted_semrl(P, tau, L, Q, A0, off, transpose=transpose)
            else:
                form = canon.semrl(P, tau, L, Q, transpose=transpose)
        table = canon.tabulate(form)
    _write(table.dumps(), a.out)
    return 0


def cmd_classify(a) -> int:
    try:
        text = Path(a.table).read_text()
    except OSError as exc:
        raise ReadError(str(exc)) from exc
    sys.stdout.write(classify(MapTable.loads(text)).render())
    return 0


def cmd_search(a) -> int:
    try:
        text = Path(a.problem).read_text()
    except OSError as exc:
        raise ReadError(str(exc)) from exc
    p = SearchProblem.loads(text)
    out: list[str] = []
    if a.mode == "first":
        res = search_hom(p if a.seed is None else p.with_seed(a.seed))
        if isinstance(res, Found):
            out.append(res.table.dumps())
        out.append(f"# result {type(res).__name__} {res.stats.render()}\n")
        _write("".join(out), a.out)
        return {Found: 0, Unsat: 1, BudgetExceeded: 2}[type(res)]
    if a.mode == "enumerate":
        tables = []
        try:
            for t in enumerate_homs(p, a.limit):  # appended one by one so a budget overrun keeps partial results
                tables.append(t)  # noqa: PERF402
            status = "complete" if len(tables) < a.limit else "limit"
        except SearchBudgetExceeded as exc:
            status = f"budget {exc.stats.render()}"
    else:
        seed = config.get().seed if a.seed is None else a.seed
        tables = sample_homs(p, a.limit, seed)
        status = f"sampled seed={seed}"
    for t in tables:
        out.append(t.dumps() + "\n")
    out.append(f"# result count={len(tables)} {status}\n")
    _write("".join(out), a.out)
    if tables:
        return 0
    return 2 if status.startswith("budget") else 1


def cmd_verify(a) -> int:
    seed = config.get().seed if a.seed is None else a.seed
    reports = harness.run_suite(a.suite, seed=seed, jobs=a.jobs)
    text = harness.render_reports(reports)
    if a.out is None:
        sys.stdout.write(text)
    else:
        out = Path(a.out)
        out.write_text(text)
        harness.save_figure(reports, out.with_suffix(".png"))
    return 0 if all(r.passed for r in reports) else EX_FAIL


# -- parser ------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="matgeom", description="Matrix graphs over finite fields: build, classify, search, verify.")
    p.add_argument("--config", help="JSON settings file (field overrides, caps, seed, output dir)")
    p.add_argument("--jobs", type=int, default=None, help="worker processes for parallel sweeps")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    f = sub.add_parser("field", help="field arithmetic and homomorphisms")
    f.add_argument("op", choices=["info", "add", "sub", "mul", "div", "neg", "inv", "pow", "homs"])
    f.add_argument("args", nargs="*", help="operands (element indices)")
    f.add_argument("--field", nargs="+", required=True, help="p=2 k=2 poly=1,1,1, or an order such as 4")
    f.add_argument("--dst", nargs="+", default=["2"], help="target field for 'homs'")
    f.set_defaults(run=cmd_field)

    m = sub.add_parser("mat", help="matrix utilities")
    m.add_argument("op", choices=["rank", "inverse", "normal-form", "g-inverse", "distance", "minus-le"])
    m.add_argument("--field", nargs="+", required=True)
    m.add_argument("--shape", help="m,n (square if omitted)")
    m.add_argument("--entries", required=True, help="row-major csv of element indices")
    m.add_argument("--other", help="second matrix for distance and minus-le")
    m.set_defaults(run=cmd_mat)

    g = sub.add_parser("graph", help="export the matrix graph")
    g.add_argument("--field", nargs="+", required=True)
    g.add_argument("--shape", required=True)
    g.add_argument("--format", choices=["dot", "edgelist"], default="dot")
    g.add_argument("--out")
    g.set_defaults(run=cmd_graph)

    c = sub.add_parser("cliques", help="list maximal adjacent sets")
    c.add_argument("--field", nargs="+", required=True)
    c.add_argument("--shape", required=True)
    c.add_argument("--through", help="only the sets through this matrix (csv)")
    c.add_argument("--out")
    c.set_defaults(run=cmd_cliques)

    k = sub.add_parser("construct", help="tabulate a canonical form or a colouring")
    k.add_argument("--form", required=True, choices=["standard", "transpose", "semrl", "semrl-t",
                                                      "shifted", "shifted-t", "colouring"])
    k.add_argument("--tau", help="src>dst:i, the i-th field homomorphism")
    k.add_argument("--P")
    k.add_argument("--Q")
    k.add_argument("--L")
    k.add_argument("--A0")
    k.add_argument("--offset")
    k.add_argument("--src-field", nargs="+", default=["2"], help="colouring source field")
    k.add_argument("--dst-field", nargs="+", default=["2"], help="colouring target field")
    k.add_argument("--shape", default="2,2", help="colouring source shape")
    k.add_argument("--dst-shape", help="colouring target shape")
    k.add_argument("--out")
    k.set_defaults(run=cmd_construct)

    cl = sub.add_parser("classify", help="classify a map table")
    cl.add_argument("table")
    cl.set_defaults(run=cmd_classify)

    s = sub.add_parser("search", help="search for graph homomorphisms")
    s.add_argument("--problem", required=True)
    s.add_argument("--mode", choices=["first", "enumerate", "sample"], default="first")
    s.add_argument("--limit", type=int, default=1)
    s.add_argument("--seed", type=int)
    s.add_argument("--out")
    s.set_defaults(run=cmd_search)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=sorted(harness.SUITES) + ["all"], default="all")
    v.add_argument("--seed", type=int)
    v.add_argument("--out", help="report file; a bar chart is written next to it as .png")
    v.set_defaults(run=cmd_verify)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        a = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EX_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        if a.config:
            config.load(a.config)
        if a.jobs is not None:
            if a.jobs < 1:
                raise UsageError("--jobs must be >= 1")
            config.update(jobs=a.jobs)
        a.jobs = config.get().jobs
        return a.run(a)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EX_USAGE
    except (ReadError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_IOERR
    except (MatGeomError, ZeroDivisionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EX_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
