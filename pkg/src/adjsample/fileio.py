"""Line-oriented text formats: polytopes, class lists, inequality lists, run logs.

Every file starts with a header line ``<kind> v1 index-base 0``.  Numbers are
integers or ``p/q`` rationals; nothing is written in floating point.

Polytope file::

    adjsample-polytope v1 index-base 0
    name L2222
    dim 8
    vertices 16
    <one vertex per line>
    generators 6
    <one permutation per line: n images>

Class file::

    adjsample-classes v1 index-base 0
    polytope L3322
    method as
    cutoff 20
    seed 0
    status complete
    classes 3
    <a_1 ... a_d b> | <tight size> | <orbit size or ->
    ...

A record ``a b`` stands for the inequality ``a . x <= b``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import IO

from .exact import as_fraction
from .polytope import Inequality, VPolytope
from .search import ClassRecord, ClassStore, SearchConfig
from .symmetry import PermGroup


class FormatError(ValueError):
    def __init__(self, msg: str, line: int | None = None, path=None):
        where = f"{path}:" if path else ""
        where += f"line {line}: " if line is not None else ""
        super().__init__(where + msg)
        self.msg, self.line, self.path = msg, line, path

    def at(self, path) -> "FormatError":
        return self if self.path else FormatError(self.msg, self.line, path)


POLY_HEADER = "adjsample-polytope v1 index-base 0"
CLASS_HEADER = "adjsample-classes v1 index-base 0"
LOG_HEADER = "adjsample-log v1 index-base 0"


def fmt_number(x) -> str:
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_number(tok: str, line: int | None = None) -> Fraction:
    try:
        if "." in tok or "e" in tok.lower():
            raise ValueError
        return Fraction(tok)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"not an integer or rational: {tok!r}", line) from None


class _Lines:
    """Iterator over non-blank, non-comment lines keeping 1-based numbers."""

    def __init__(self, text: str, path=None):
        self.items = [(i + 1, ln.strip()) for i, ln in enumerate(text.splitlines())]
        self.items = [(i, ln) for i, ln in self.items if ln and not ln.startswith("#")]
        self.pos = 0
        self.path = path

    def next(self, what: str) -> tuple[int, str]:
        if self.pos >= len(self.items):
            last = self.items[-1][0] if self.items else 0
            raise FormatError(f"unexpected end of file, expected {what}", last + 1, self.path)
        item = self.items[self.pos]
        self.pos += 1
        return item

    def keyword(self, key: str) -> tuple[int, str]:
        no, ln = self.next(key)
        head, _, rest = ln.partition(" ")
        if head != key:
            raise FormatError(f"expected '{key} ...', got {ln!r}", no, self.path)
        return no, rest.strip()

    def count(self, key: str) -> int:
        no, rest = self.keyword(key)
        try:
            value = int(rest)
        except ValueError:
            raise FormatError(f"{key} needs an integer, got {rest!r}", no, self.path) from None
        if value < 0:
            raise FormatError(f"{key} must be nonnegative", no, self.path)
        return value

    def done(self) -> bool:
        return self.pos >= len(self.items)


def _check_header(lines: _Lines, header: str):
    no, ln = lines.next("header")
    if ln != header:
        raise FormatError(f"expected header {header!r}, got {ln!r}", no, lines.path)


# ---------------------------------------------------------------------------
# polytopes


@dataclass
class PolytopeFile:
    name: str
    vertices: list[tuple[Fraction, ...]]
    generators: list[list[int]] = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.vertices[0]) if self.vertices else 0

    @classmethod
    def from_polytope(cls, P: VPolytope, G: PermGroup | None = None) -> "PolytopeFile":
        gens = [list(map(int, g)) for g in G.generators] if G is not None else []
        return cls(P.name, [tuple(v) for v in P.vertices], gens)

    def polytope(self) -> tuple[VPolytope, PermGroup | None]:
        P = VPolytope(self.vertices, name=self.name)
        G = PermGroup(P.n, self.generators) if self.generators else None
        return P, G

    def dumps(self) -> str:
        out = [POLY_HEADER, f"name {self.name or '-'}", f"dim {self.dim}", f"vertices {len(self.vertices)}"]
        out += [" ".join(fmt_number(x) for x in v) for v in self.vertices]
        out.append(f"generators {len(self.generators)}")
        out += [" ".join(map(str, g)) for g in self.generators]
        return "\n".join(out) + "\n"

    @classmethod
    def loads(cls, text: str, path=None) -> "PolytopeFile":
        L = _Lines(text, path)
        _check_header(L, POLY_HEADER)
        _, name = L.keyword("name")
        d = L.count("dim")
        n = L.count("vertices")
        verts = []
        for _ in range(n):
            no, ln = L.next("vertex")
            toks = ln.split()
            if len(toks) != d:
                raise FormatError(f"vertex has {len(toks)} coordinates, expected {d}", no, path)
            try:
                verts.append(tuple(parse_number(t, no) for t in toks))
            except FormatError as exc:
                raise exc.at(path) from None
        gens = []
        if not L.done():
            k = L.count("generators")
            for _ in range(k):
                no, ln = L.next("generator")
                try:
                    g = [int(t) for t in ln.split()]
                except ValueError:
                    raise FormatError("generator entries must be integers", no, path) from None
                if sorted(g) != list(range(n)):
                    raise FormatError("generator is not a permutation of the vertex indices", no, path)
                gens.append(g)
        if not L.done():
            no, ln = L.next("end")
            raise FormatError(f"trailing content {ln!r}", no, path)
        return cls("" if name == "-" else name, verts, gens)


# ---------------------------------------------------------------------------
# inequalities and classes


def fmt_inequality(q: Inequality) -> str:
    return " ".join(map(str, q.a)) + " " + str(q.b)


def parse_inequality(line: str, dim: int | None = None, no: int | None = None) -> Inequality:
    toks = line.split()
    if len(toks) < 2:
        raise FormatError("an inequality needs at least one coefficient and a bound", no)
    if dim is not None and len(toks) != dim + 1:
        raise FormatError(f"inequality has {len(toks) - 1} coefficients, expected {dim}", no)
    vals = [parse_number(t, no) for t in toks]
    try:
        return Inequality(tuple(vals[:-1]), vals[-1])
    except ValueError as exc:
        raise FormatError(str(exc), no) from None


def read_inequalities(text: str, dim: int | None = None, path=None) -> list[tuple[int, Inequality]]:
    """Parse one inequality ``a_1 ... a_d b`` per line; returns (line number, inequality)."""
    out = []
    for no, ln in _Lines(text, path).items:
        try:
            out.append((no, parse_inequality(ln, dim, no)))
        except FormatError as exc:
            raise exc.at(path) from None
    return out


@dataclass
class ClassEntry:
    inequality: Inequality
    tight_size: int
    orbit: int | None = None
    line: int | None = None


@dataclass
class ClassFile:
    polytope: str
    method: str
    cutoff: int | None
    seed: int | None
    status: str
    entries: list[ClassEntry] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return self.status == "complete"

    @classmethod
    def from_store(cls, P: VPolytope, store: ClassStore, cfg: SearchConfig, orbits: dict | None = None) -> "ClassFile":
        entries = []
        for rec in store.records():
            q = rec.face(P).support  # canonical representative, independent of history
            orbit = None if orbits is None else orbits.get(rec.key)
            entries.append(ClassEntry(q, len(rec.key), orbit))
        return cls(P.name, cfg.method, cfg.n_cutoff, cfg.seed, store.status, entries)

    def dumps(self) -> str:
        out = [
            CLASS_HEADER,
            f"polytope {self.polytope or '-'}",
            f"method {self.method}",
            f"cutoff {'-' if self.cutoff is None else self.cutoff}",
            f"seed {'-' if self.seed is None else self.seed}",
            f"status {self.status}",
            f"classes {len(self.entries)}",
        ]
        for e in self.entries:
            orbit = "-" if e.orbit is None else str(e.orbit)
            out.append(f"{fmt_inequality(e.inequality)} | {e.tight_size} | {orbit}")
        return "\n".join(out) + "\n"

    @classmethod
    def loads(cls, text: str, path=None) -> "ClassFile":
        L = _Lines(text, path)
        _check_header(L, CLASS_HEADER)
        _, name = L.keyword("polytope")
        _, method = L.keyword("method")
        no, cutoff = L.keyword("cutoff")
        no2, seed = L.keyword("seed")
        _, status = L.keyword("status")
        k = L.count("classes")

        def opt_int(tok, no):
            if tok == "-":
                return None
            try:
                return int(tok)
            except ValueError:
                raise FormatError(f"expected an integer or '-', got {tok!r}", no, path) from None

        entries = []
        for _ in range(k):
            no3, ln = L.next("class record")
            parts = [p.strip() for p in ln.split("|")]
            if len(parts) != 3:
                raise FormatError("class record needs 'coefficients | tight size | orbit'", no3, path)
            try:
                q = parse_inequality(parts[0], None, no3)
            except FormatError as exc:
                raise exc.at(path) from None
            entries.append(ClassEntry(q, opt_int(parts[1], no3), opt_int(parts[2], no3), no3))
        if not L.done():
            no4, ln = L.next("end")
            raise FormatError(f"trailing content {ln!r}", no4, path)
        return cls("" if name == "-" else name, method, opt_int(cutoff, no), opt_int(seed, no2), status, entries)


# ---------------------------------------------------------------------------
# append-only run log


class RunLog:
    """Append-only journal of a search: ``C`` lines for classes, ``D`` lines for finished tasks.

    ``C <ordinal> <source> <key...> | <a...> <b>`` and ``D <ordinal> <visit>``.
    The first line after the header records the run parameters; resuming with
    different parameters is refused.
    """

    def __init__(self, path, params: str):
        self.path = Path(path)
        self.params = params
        self._fh: IO[str] | None = None

    def _open(self, fresh: bool):
        self._fh = open(self.path, "w" if fresh else "a", encoding="ascii")
        if fresh:
            self._fh.write(f"{LOG_HEADER}\nP {self.params}\n")
            self._fh.flush()

    def start(self):
        self._open(True)

    def record_class(self, rec: ClassRecord):
        key = " ".join(map(str, rec.key))
        self._fh.write(f"C {rec.ordinal} {rec.source} {key} | {fmt_inequality(rec.found)}\n")
        self._fh.flush()

    def record_done(self, ordinal: int, visit: int):
        self._fh.write(f"D {ordinal} {visit}\n")
        self._fh.flush()

    def close(self):
        if self._fh is not None:
            self._fh.close()
            self._fh = None

    def replay(self, Q: VPolytope) -> tuple[ClassStore, set[tuple[int, int]]]:
        """Rebuild the store from the log and reopen it for appending.

        A final line without a newline is a torn write and is dropped.
        """
        text = self.path.read_text(encoding="ascii")
        lines = text.split("\n")[:-1]
        if len(lines) < 2 or lines[0] != LOG_HEADER:
            raise FormatError("not a run log", 1, self.path)
        if lines[1] != f"P {self.params}":
            raise FormatError(f"log was written with different parameters: {lines[1][2:]!r}", 2, self.path)
        store, done = ClassStore(), set()
        good = len(lines[0]) + len(lines[1]) + 2
        for no, ln in enumerate(lines[2:], start=3):
            toks = ln.split()
            try:
                if toks[0] == "C":
                    head, _, ineq = ln.partition("|")
                    h = head.split()
                    ordinal, source, key = int(h[1]), int(h[2]), tuple(int(t) for t in h[3:])
                    q = parse_inequality(ineq, Q.ambient_dim, no)
                    tight, valid = Q.tight_set(q)
                    if not valid or len(tight) != len(key):
                        raise FormatError("logged representative does not match its key", no, self.path)
                    rec = store.insert(key, q, tight, source)
                    if rec is None or rec.ordinal != ordinal:
                        raise FormatError("class ordinals out of sequence", no, self.path)
                elif toks[0] == "D":
                    done.add((int(toks[1]), int(toks[2])))
                else:
                    raise FormatError(f"unknown record {toks[0]!r}", no, self.path)
            except (IndexError, ValueError) as exc:
                if isinstance(exc, FormatError):
                    raise
                raise FormatError(f"malformed log line {ln!r}", no, self.path) from None
            good += len(ln) + 1
        # drop a torn tail so appends start on a fresh line
        with open(self.path, "r+", encoding="ascii") as fh:
            fh.truncate(good)
        self._open(False)
        return store, done


def write_text(path, text: str):
    """Write atomically: a temporary file renamed over the target."""
    path = Path(path)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="ascii")
    os.replace(tmp, path)
