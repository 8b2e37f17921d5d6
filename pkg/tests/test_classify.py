import functools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from solvrank.classify import (GOLDEN, RowParameterError, build_gammaL1, classify_row, fingerprint,
                               run_tables, symplectic_order, tables_csv, validate_row,
                               verify_structure, write_row)
from solvrank.engine import MatGroup, is_solvable, rank_of_action
from solvrank.matlin import inverse_mod, read_matgroup
from solvrank.modana import is_irreducible, is_quasiprimitive


@functools.lru_cache(maxsize=None)
def row(no):
    _, q, m, p, k, *_rest, note = GOLDEN[no - 1]
    kind = {"E-": "minus", "E+": "plus", "": "odd"}[note]
    return classify_row(q, m, p, k, kind)


@pytest.mark.parametrize("args,msg", [
    ((5, 1, 3, 1, "minus"), "q must be 2 or 3"),
    ((2, 1, 4, 1, "minus"), "not prime"),
    ((2, 1, 2, 1, "minus"), "differ"),
    ((2, 1, 73, 1, "minus"), "outside the case grid"),
    ((2, 2, 11, 1, "minus"), "outside the case grid"),
    ((3, 1, 7, 1, "plus"), "no extraspecial group"),
])
def test_validate_row_rejects(args, msg):
    with pytest.raises(RowParameterError, match=msg):
        validate_row(*args)


def test_validate_row_accepts_reducible_grid():
    validate_row(2, 1, 7, 1, "minus", reducible_r=2)
    validate_row(2, 1, 3, 1, "minus", reducible_r=5)
    with pytest.raises(RowParameterError):
        validate_row(2, 1, 11, 1, "minus", reducible_r=2)


def test_symplectic_orders():
    assert (symplectic_order(1, 2), symplectic_order(1, 3), symplectic_order(2, 2)) == (6, 24, 720)


@pytest.mark.parametrize("p,d", [(3, 1), (5, 2), (3, 4), (2, 5), (7, 2)])
def test_gammal1(p, d):
    G = build_gammaL1(p, d)
    assert G.degree == d
    assert G.order == (p**d - 1) * (d if d > 1 else 1)
    assert rank_of_action(G) == 2
    assert is_solvable(G)


def test_row1_record():
    rec = row(1)
    assert (rec.rank, rec.max_order, rec.num_groups, rec.note) == (2, 48, 4, "E-")
    orders = [g.order for g in rec.groups]
    assert orders == sorted(orders, reverse=True)
    for g in rec.groups:
        G = g.group
        assert g.rank <= 4 and is_solvable(G) and is_irreducible(G) and is_quasiprimitive(G)
        assert g.structure.ok


def test_row_files_round_trip(tmp_path):
    rec = row(3)
    names = write_row(rec, str(tmp_path))
    doc = json.loads((tmp_path / "row.json").read_text())
    assert doc["num_groups"] == rec.num_groups == len(names)
    for g, name in zip(rec.groups, names):
        field, n, gens = read_matgroup((tmp_path / name).read_text())
        G = MatGroup(gens, field=field, dim=n)
        assert (G.order, rank_of_action(G)) == (g.order, g.rank)
    first = (tmp_path / "row.json").read_bytes()
    write_row(rec, str(tmp_path))
    assert (tmp_path / "row.json").read_bytes() == first


STRUCTURE_ROWS = (1, 2, 3, 4, 5, 9, 10, 11, 12, 13)


@settings(max_examples=25)
@given(st.sampled_from(STRUCTURE_ROWS), st.integers(0, 20))
def test_emitted_groups_pass_structure_checks(no, i):
    rec = row(no)
    g = rec.groups[i % len(rec.groups)]
    rep = verify_structure(g.group)
    assert rep.ok, rep.failed()
    assert rep.g0 == g.order


def test_structure_check_flags_noncyclic_abelian_normal_subgroup():
    diag = MatGroup.from_arrays(3, [[[2, 0], [0, 1]], [[1, 0], [0, 2]]])
    rep = verify_structure(diag)
    assert not rep.ok
    assert "U is cyclic" in rep.failed()


@settings(max_examples=15)
@given(st.integers(0, 3), st.lists(st.integers(0, 6), min_size=4, max_size=4))
def test_fingerprint_is_conjugation_invariant(i, entries):
    C = np.array(entries).reshape(2, 2) % 7
    if round(np.linalg.det(C)) % 7 == 0:
        C = np.array([[1, 1], [0, 1]])
    g = row(3).groups[i % row(3).num_groups].group
    Ci = inverse_mod(C, 7)
    h = MatGroup.from_arrays(7, [C @ x @ Ci for x in g.lin])
    assert fingerprint(h) == fingerprint(g)


def test_tables_are_independent_of_jobs():
    a = tables_csv(run_tables(rows=[1, 4, 10]))
    b = tables_csv(run_tables(rows=[1, 4, 10], jobs=2))
    assert a == b
    assert a.splitlines()[0] == "No.,q,m,p,k,d,Rank(G),Max|G0|,Num Gps,Note,Status"
    assert all(line.endswith(",MATCH") for line in a.splitlines()[1:])


def test_run_tables_rejects_unknown_budget():
    with pytest.raises(ValueError):
        run_tables("huge")
