import io
import os
from pathlib import Path

import numpy as np
import pytest

from locoh.cli import main
from locoh.errors import UnsupportedLevel
from locoh.groups import gl2_order
from locoh.scan import AmbientGL2, ScanSpec, ambient, are_conjugate, conjugate_subgroups, enumerate_subgroups

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("LOCOH_REGEN_GOLDEN") == "1"


def _all_subgroups_literal(p):
    """Every subgroup of GL_2(F_p), as joins of cyclic groups until nothing new appears."""
    amb = ambient(p)
    found = {frozenset(amb.closure([g]).tolist()) for g in range(amb.N)}
    frontier = set(found)
    while frontier:
        new = set()
        for S in frontier:
            for g in range(amb.N):
                if g in S:
                    continue
                T = frozenset(amb.closure(sorted(S) + [g]).tolist())
                if T not in found:
                    new.add(T)
        found |= new
        frontier = new
    return found


def test_p3_classes_match_literal_enumeration():
    classes = enumerate_subgroups(ScanSpec(3))
    literal = _all_subgroups_literal(3)
    assert len(literal) == 55
    assert sum(len(conjugate_subgroups(G)) for G in classes) == len(literal)
    assert len(classes) == 16
    assert len(enumerate_subgroups(ScanSpec(3, max_generators=3))) == 16


def test_scan_shape():
    for p, count in ((2, 4), (3, 16), (5, 47)):
        groups = enumerate_subgroups(ScanSpec(p))
        assert len(groups) == count
        assert len(groups[0]) == 1
        assert len(groups[-1]) == gl2_order(p)


def test_classes_are_irredundant():
    groups = enumerate_subgroups(ScanSpec(5))
    for i, G in enumerate(groups):
        for H in groups[i + 1:]:
            if len(G) == len(H):
                assert not are_conjugate(G, H)


def test_det_filter_and_caps():
    full = enumerate_subgroups(ScanSpec(5, det_filter=True))
    assert len(full) == 19 and all(G.det_order == 4 for G in full)
    small = enumerate_subgroups(ScanSpec(5, max_order=20))
    assert small and all(len(G) <= 20 for G in small)


def test_scan_refuses_large_p():
    with pytest.raises(UnsupportedLevel):
        AmbientGL2(11)


def test_jobs_do_not_change_output():
    a = enumerate_subgroups(ScanSpec(5))
    b = enumerate_subgroups(ScanSpec(5), jobs=4)
    assert [G.ambient_indices.tolist() for G in a] == [G.ambient_indices.tolist() for G in b]
    assert [G.generators for G in a] == [G.generators for G in b]


def _run(argv):
    buf = io.StringIO()
    code = main(argv, out=buf)
    return code, buf.getvalue()


@pytest.mark.parametrize("name, argv", [
    ("scan_p3.txt", ["scan", "3", "--no-det-filter"]),
    ("scan_p5.txt", ["scan", "5"]),
])
def test_scan_golden(name, argv):
    code, text = _run(argv)
    assert code == 0
    path = GOLDEN / name
    if REGEN:
        path.write_text(text)
    assert path.exists(), f"missing golden file {name}; regenerate with LOCOH_REGEN_GOLDEN=1"
    assert text == path.read_text()


def test_ambient_tables_are_consistent():
    amb = ambient(3)
    assert amb.N == 48
    for a in range(amb.N):
        assert amb.mul[a, amb.inverse[a]] == amb.identity
    x, h = 5, 17
    assert amb.conj[x, h] == amb.mul[amb.mul[x, h], amb.inverse[x]]
    assert np.array_equal(np.sort(amb.closure([amb.identity])), [amb.identity])
