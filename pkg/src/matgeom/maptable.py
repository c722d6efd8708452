"""Explicit total maps between matrix spaces and the ``maptable v1`` file format."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import InvalidField, MalformedTable, ShapeMismatch
from .fields import FieldSpec
from .matrices import Mat, check_cap, decode, encode
from .space import MatrixSpace, space


@dataclass(frozen=True)
class MapTable:
    """A total function GF(q)^{m x n} -> GF(q')^{m' x n'}.

    ``codes[i]`` is the encoding of the image of the source matrix with
    encoding ``i``.
    """

    src: FieldSpec
    m: int
    n: int
    dst: FieldSpec
    dm: int
    dn: int
    codes: tuple[int, ...]

    def __post_init__(self):
        if len(self.codes) != self.src.q ** (self.m * self.n):
            raise MalformedTable(f"table has {len(self.codes)} entries, expected {self.src.q ** (self.m * self.n)}")

    @classmethod
    def from_function(cls, src: FieldSpec, m: int, n: int, dst: FieldSpec, dm: int, dn: int,
                      fn: Callable[[Mat], Mat]) -> MapTable:
        sp = space(src, m, n)
        check_cap(sp.size, what="tabulation")
        codes = []
        for X in sp.mats:
            Y = fn(X)
            if Y.field != dst or Y.shape != (dm, dn):
                raise ShapeMismatch(f"image {Y!r} is not in GF({dst.q})^{dm}x{dn}")
            codes.append(encode(Y))
        return cls(src, m, n, dst, dm, dn, tuple(codes))

    @property
    def src_space(self) -> MatrixSpace:
        return space(self.src, self.m, self.n)

    @property
    def dst_space(self) -> MatrixSpace:
        return space(self.dst, self.dm, self.dn)

    @cached_property
    def code_array(self) -> np.ndarray:
        return np.array(self.codes, dtype=np.int64)

    @cached_property
    def images(self) -> tuple[Mat, ...]:
        return tuple(decode(self.dst, self.dm, self.dn, c) for c in self.codes)

    def __call__(self, X: Mat) -> Mat:
        if X.field != self.src or X.shape != (self.m, self.n):
            raise ShapeMismatch("argument is not in the source space")
        return self.images[encode(X)]

    def image_set(self) -> list[Mat]:
        return [decode(self.dst, self.dm, self.dn, c) for c in sorted(set(self.codes))]

    def with_codes(self, codes) -> MapTable:
        return MapTable(self.src, self.m, self.n, self.dst, self.dm, self.dn, tuple(int(c) for c in codes))

    def header(self) -> str:
        return (f"src {self.src.to_text()}\nsrc shape {self.m} {self.n}\n"
                f"dst {self.dst.to_text()}\ndst shape {self.dm} {self.dn}\n")

    def dumps(self) -> str:
        sp = self.src_space
        body = "".join(f"{sp.mat(i).to_csv()} => {Y.to_csv()}\n" for i, Y in enumerate(self.images))
        return "maptable v1\n" + self.header() + body

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def loads(cls, text: str) -> MapTable:
        lines = [ln.strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln and not ln.startswith("#")]
        if not lines or lines[0] != "maptable v1":
            raise MalformedTable("missing 'maptable v1' header")
        (src, m, n, dst, dm, dn), rest = parse_header(lines[1:])
        size = src.q ** (m * n)
        codes: list[int | None] = [None] * size
        for ln in rest:
            if "=>" not in ln:
                raise MalformedTable(f"unexpected line {ln!r}")
            lhs, rhs = (s.strip() for s in ln.split("=>", 1))
            X, Y = parse_matrix(src, m, n, lhs), parse_matrix(dst, dm, dn, rhs)
            i = encode(X)
            if codes[i] is not None:
                raise MalformedTable(f"duplicate entry for {lhs}")
            codes[i] = encode(Y)
        if any(c is None for c in codes):
            raise MalformedTable(f"table is not total: {codes.count(None)} of {size} source matrices missing")
        return cls(src, m, n, dst, dm, dn, tuple(codes))

    @classmethod
    def load(cls, path: str | Path) -> MapTable:
        return cls.loads(Path(path).read_text())


def parse_matrix(field: FieldSpec, m: int, n: int, text: str) -> Mat:
    try:
        entries = tuple(int(t) for t in text.split(","))
    except ValueError as exc:
        raise MalformedTable(f"malformed matrix {text!r}") from exc
    if len(entries) != m * n or any(not 0 <= e < field.q for e in entries):
        raise MalformedTable(f"matrix {text!r} does not fit GF({field.q})^{m}x{n}")
    return Mat(field, m, n, entries)


def parse_header(lines: list[str]):
    """Consume the four src/dst header lines; return the parsed values and the remaining lines."""
    if len(lines) < 4:
        raise MalformedTable("truncated header")
    try:
        if not lines[0].startswith("src field") or not lines[2].startswith("dst field"):
            raise MalformedTable("expected 'src field' and 'dst field' lines")
        src = FieldSpec.parse(lines[0][len("src "):])
        dst = FieldSpec.parse(lines[2][len("dst "):])
        m, n = _shape(lines[1], "src")
        dm, dn = _shape(lines[3], "dst")
    except InvalidField as exc:
        raise MalformedTable(str(exc)) from exc
    return (src, m, n, dst, dm, dn), lines[4:]


def _shape(line: str, side: str) -> tuple[int, int]:
    parts = line.split()
    if len(parts) != 4 or parts[:2] != [side, "shape"]:
        raise MalformedTable(f"expected '{side} shape <m> <n>', got {line!r}")
    try:
        m, n = int(parts[2]), int(parts[3])
    except ValueError as exc:
        raise MalformedTable(f"bad shape line {line!r}") from exc
    if m < 1 or n < 1:
        raise MalformedTable(f"bad shape line {line!r}")
    return m, n
