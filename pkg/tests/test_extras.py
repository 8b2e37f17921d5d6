import numpy as np
import pytest

from oracles import lift_equals_brute
from solvrank.engine import MatGroup, contains
from solvrank.extras import (ExtraspecialError, ExtraspecialSpec, build_extraspecial,
                             commutator_form, exponent9_extraspecial, gl_generators, linear_conjugate,
                             normalizer_of_extraspecial, order3_subgroup, semilinear_normalizer,
                             symplectic_group, tensor_normalizer, verify_extraspecial)
from solvrank.gfarith import make_field
from solvrank.matlin import Mat, inverse_mod

SCOPED_FIELDS = {
    (2, 1, "minus"): [(p, 1) for p in (3, 5, 7, 11, 13, 23, 71)] + [(3, 2), (5, 2), (3, 3)],
    (2, 1, "plus"): [(3, 1), (7, 1), (23, 1), (31, 1)],
    (2, 2, "minus"): [(3, 1), (5, 1), (7, 1)],
    (2, 2, "plus"): [(3, 1), (5, 1)],
    (3, 1, "odd"): [(7, 1), (2, 2)],
}


def test_q8_over_gf3_generators():
    E = build_extraspecial(ExtraspecialSpec(2, 1, "minus"), make_field(3))
    assert [g.codes.tolist() for g in E.gens] == [[[0, 1], [2, 0]], [[1, 1], [1, 2]]]
    assert E.order == 8


def test_m27_over_gf4_generators():
    F = make_field(2, 2)
    E = build_extraspecial(ExtraspecialSpec(3, 1, "odd"), F)
    x = F.gen
    assert E.gens[1] == Mat.from_rows(F, [[1, 0, 0], [0, x, 0], [0, 0, x + F.one]])
    assert E.order == 27


def test_e_minus_over_gf3_center():
    E = build_extraspecial(ExtraspecialSpec(2, 2, "minus"), make_field(3))
    els = E.elements()
    assert els.n == 32
    central = [m for m in els.mats if all(np.array_equal(m @ g % 3, g @ m % 3) for g in E.lin)]
    assert sorted(int(m[0, 0]) for m in central) == [1, 2]
    assert all(np.array_equal(m, m[0, 0] * np.eye(4, dtype=np.int64)) for m in central)


@pytest.mark.parametrize("spec,field", [(s, f) for s, fs in SCOPED_FIELDS.items() for f in fs])
def test_verify_extraspecial_on_scoped_fields(spec, field):
    S = ExtraspecialSpec(*spec)
    rep = verify_extraspecial(build_extraspecial(S, make_field(*field)), S)
    assert rep.order == S.order and rep.center_order == S.q and rep.kind == S.kind


def test_involution_counts():
    F = make_field(3)
    d8 = verify_extraspecial(build_extraspecial(ExtraspecialSpec(2, 1, "plus"), F), ExtraspecialSpec(2, 1, "plus"))
    q8 = verify_extraspecial(build_extraspecial(ExtraspecialSpec(2, 1, "minus"), F), ExtraspecialSpec(2, 1, "minus"))
    assert (d8.involutions, q8.involutions) == (6, 2)
    m27 = verify_extraspecial(build_extraspecial(ExtraspecialSpec(3, 1, "odd"), make_field(7)),
                              ExtraspecialSpec(3, 1, "odd"))
    assert m27.exponent == 3


def test_wrong_kind_is_rejected():
    F = make_field(3)
    with pytest.raises(ExtraspecialError):
        verify_extraspecial(build_extraspecial(ExtraspecialSpec(2, 1, "plus"), F), ExtraspecialSpec(2, 1, "minus"))
    with pytest.raises(ExtraspecialError):
        ExtraspecialSpec(3, 2, "odd")
    with pytest.raises(ExtraspecialError):
        build_extraspecial(ExtraspecialSpec(3, 1, "odd"), make_field(5))
    with pytest.raises(ExtraspecialError):
        build_extraspecial(ExtraspecialSpec(2, 1, "minus"), make_field(2, 2))


@pytest.mark.parametrize("spec,size", [((2, 1, "minus"), 6), ((3, 1, "odd"), 24), ((2, 2, "plus"), 720)])
def test_symplectic_group_orders(spec, size):
    S = ExtraspecialSpec(*spec)
    F = make_field(7) if S.q == 3 else make_field(3)
    f = commutator_form(build_extraspecial(S, F), S)
    assert len(symplectic_group(f, S.q)) == size


# small ambients where the exhaustive scan is cheap; GL(4,3) runs with the acceptance suite
SMALL_AMBIENTS = [
    (2, 1, "minus", 3, 1), (2, 1, "minus", 5, 1), (2, 1, "plus", 7, 1), (2, 1, "minus", 13, 1),
    (2, 1, "minus", 3, 2), (2, 1, "minus", 5, 2), (2, 1, "minus", 3, 3),
    (3, 1, "odd", 2, 2), (3, 1, "odd", 7, 1),
]


@pytest.mark.parametrize("amb", SMALL_AMBIENTS)
def test_lift_equals_brute(amb):
    assert lift_equals_brute(*amb)


def test_q8_normalizer_is_gl23():
    S = ExtraspecialSpec(2, 1, "minus")
    res = normalizer_of_extraspecial(build_extraspecial(S, make_field(3)), S)
    assert res.N.order == 48 and res.lifted_symplectic_count == 6


def test_m27_normalizer_over_gf7():
    S = ExtraspecialSpec(3, 1, "odd")
    assert normalizer_of_extraspecial(build_extraspecial(S, make_field(7)), S).N.order == 1296


def test_e_plus_over_gf5_lifts_normalize():
    S = ExtraspecialSpec(2, 2, "plus")
    E = build_extraspecial(S, make_field(5))
    res = normalizer_of_extraspecial(E, S)
    assert res.N.order % 4608 == 0
    Eel = E.elements()
    for g in res.N.gens:
        X = g.codes
        Xi = g.inverse().codes
        assert (Eel.index((X @ Eel.mats @ Xi) % 5) >= 0).all()
    # the lifted symplectic elements form a subgroup of Sp(4, 2)
    assert 720 % res.lifted_symplectic_count == 0


def test_semilinear_rejects_prime_field():
    S = ExtraspecialSpec(2, 1, "minus")
    NE = normalizer_of_extraspecial(build_extraspecial(S, make_field(3)), S).N
    with pytest.raises(ValueError):
        semilinear_normalizer(NE)


def test_semilinear_row14_contains_blowup():
    S = ExtraspecialSpec(2, 1, "minus")
    NE = normalizer_of_extraspecial(build_extraspecial(S, make_field(3, 3)), S).N
    N = semilinear_normalizer(NE).N
    assert N.order % NE.order == 0 and (N.order // NE.order) % 3 == 0
    P = NE.to_prime()
    assert all(contains(N, h) for h in P.lin)


def test_tensor_normalizer():
    S = ExtraspecialSpec(2, 1, "minus")
    NE = normalizer_of_extraspecial(build_extraspecial(S, make_field(3)), S).N
    assert tensor_normalizer(NE, 1).N is NE
    T = tensor_normalizer(NE, 2).N
    assert T.degree == 4 and T.order == 48 * 48 // 2
    with pytest.raises(ValueError):
        tensor_normalizer(NE, 6)


def test_linear_conjugate_finds_a_conjugator():
    G = MatGroup(gl_generators(make_field(5), 2))
    S = ExtraspecialSpec(2, 1, "minus")
    H = normalizer_of_extraspecial(build_extraspecial(S, make_field(5)), S).N
    C = np.array([[1, 2], [3, 3]])
    Ci = inverse_mod(C, 5)
    K = MatGroup.from_arrays(5, [C @ h @ Ci for h in H.lin])
    X = linear_conjugate(H, K)
    assert X is not None
    image = (X @ H.elements().mats @ inverse_mod(X, 5)) % 5
    assert (K.elements().index(image) >= 0).all()
    assert linear_conjugate(H, G) is None


def test_exponent9_group_yields_abelian_noncyclic_order9():
    G = exponent9_extraspecial()
    assert len(G.elements()) == 27
    els = order3_subgroup(G).elements()
    assert els.n == 9
    eye = np.eye(27, dtype=np.int64)
    M = els.mats
    assert all(np.array_equal(a @ b % 2, b @ a % 2) for a in M for b in M)      # abelian
    assert all(np.array_equal(m @ m @ m % 2, eye) for m in M)                   # exponent 3: not cyclic
