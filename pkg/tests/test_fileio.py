from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from adjsample import fileio
from adjsample.fileio import ClassEntry, ClassFile, FormatError, PolytopeFile, RunLog
from adjsample.polytope import Inequality
from adjsample.search import SearchConfig, run_search

from conftest import named

fractions = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 1000)


@given(st.lists(st.lists(fractions, min_size=3, max_size=3), min_size=1, max_size=8, unique_by=tuple))
def test_polytope_file_round_trip_random(rows):
    pf = PolytopeFile("p", [tuple(r) for r in rows], [])
    text = pf.dumps()
    back = PolytopeFile.loads(text)
    assert back == pf
    assert back.dumps() == text


@pytest.mark.parametrize("name", ["L2222", "K4", "L3322"])
def test_polytope_file_round_trip_generated(name):
    P, G = named(name)
    pf = PolytopeFile.from_polytope(P, G)
    back = PolytopeFile.loads(pf.dumps())
    assert back.dumps() == pf.dumps()
    P2, G2 = back.polytope()
    assert P2.vertices == P.vertices
    assert G2.order == G.order


def test_rational_tokens():
    assert fileio.parse_number("-3/6") == Fraction(-1, 2)
    assert fileio.fmt_number(Fraction(4, 2)) == "2"
    for bad in ("0.5", "1e3", "x", "1/0"):
        with pytest.raises(FormatError):
            fileio.parse_number(bad)


@pytest.mark.parametrize(
    "text,line",
    [
        ("adjsample-polytope v1 index-base 1\n", 1),
        ("adjsample-polytope v1 index-base 0\nname a\ndim 2\nvertices 2\n0 0\n1\n", 6),
        ("adjsample-polytope v1 index-base 0\nname a\ndim 2\nvertices 2\n0 0\n1 0.5\n", 6),
        ("adjsample-polytope v1 index-base 0\nname a\ndim 1\nvertices 2\n0\n1\ngenerators 1\n0 0\n", 8),
        ("adjsample-polytope v1 index-base 0\nname a\ndim 1\n# comment\nvertices 3\n0\n1\n", 8),
        ("adjsample-polytope v1 index-base 0\nname a\ndim 1\nvertices 1\n0\nextra\n", 6),
    ],
)
def test_polytope_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(FormatError) as exc:
        PolytopeFile.loads(text, "p.poly")
    assert exc.value.line == line
    assert f"p.poly:line {line}:" in str(exc.value)


def test_class_file_round_trip():
    cf = ClassFile("L2222", "as", 20, 3, "complete", [ClassEntry(Inequality((1, -1), 2), 5, 16), ClassEntry(Inequality((0, 1), 0), 4, None)])
    text = cf.dumps()
    back = ClassFile.loads(text)
    assert back.dumps() == text
    assert [e.line for e in back.entries] == [8, 9]
    assert back.complete


def test_class_file_bad_record():
    text = ClassFile("x", "as", 1, 0, "complete", [ClassEntry(Inequality((1,), 1), 2, None)]).dumps()
    with pytest.raises(FormatError) as exc:
        ClassFile.loads(text.replace("| 2 |", "| two |"))
    assert exc.value.line == 8


def test_inequality_list():
    items = fileio.read_inequalities("# header\n1 2 3\n\n2 4 6\n", 2)
    assert [no for no, _ in items] == [2, 4]
    assert items[0][1] == items[1][1]  # normalized to the same primitive form
    with pytest.raises(FormatError) as exc:
        fileio.read_inequalities("1 2 3\n1 2\n", 2, "list.txt")
    assert exc.value.line == 2 and str(exc.value).startswith("list.txt:line 2:")


def _logged_run(tmp_path, **kw):
    P, G = named("L3223")
    cfg = SearchConfig(n_cutoff=12, **kw)
    log = RunLog(tmp_path / "run.log", "demo")
    log.start()
    store = run_search(P, G, cfg, journal=log)
    log.close()
    return P, G, cfg, store, log


def test_log_replay_rebuilds_store(tmp_path):
    P, G, cfg, store, log = _logged_run(tmp_path)
    again, done = log.replay(P)
    log.close()
    assert [r.key for r in again.records()] == [r.key for r in store.records()]
    assert done == {(r.ordinal, 0) for r in store.records()}


def test_log_torn_tail_is_dropped(tmp_path):
    P, G, cfg, store, log = _logged_run(tmp_path, max_classes=2)
    whole = log.path.read_text()
    log.path.write_text(whole + "C 2 0 1 2 3")  # crash mid-write
    again, _ = log.replay(P)
    log.close()
    assert len(again) == 2
    assert log.path.read_text() == whole


def test_log_parameter_mismatch(tmp_path):
    P, G, cfg, store, log = _logged_run(tmp_path, max_classes=1)
    with pytest.raises(FormatError, match="different parameters"):
        RunLog(log.path, "other").replay(P)


def test_log_corrupt_representative(tmp_path):
    P, G, cfg, store, log = _logged_run(tmp_path, max_classes=1)
    lines = log.path.read_text().splitlines()
    head, _, ineq = lines[2].partition("|")
    toks = ineq.split()
    toks[-1] = str(int(toks[-1]) + 1)
    lines[2] = head + "| " + " ".join(toks)
    log.path.write_text("\n".join(lines) + "\n")
    with pytest.raises(FormatError, match="line 3"):
        RunLog(log.path, "demo").replay(P)


def test_write_text_is_atomic(tmp_path):
    target = tmp_path / "out.txt"
    fileio.write_text(target, "one\n")
    fileio.write_text(target, "two\n")
    assert target.read_text() == "two\n"
    assert not (tmp_path / "out.txt.tmp").exists()
