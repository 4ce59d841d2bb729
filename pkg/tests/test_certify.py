import pytest

from legdga import augment as au
from legdga import certify as ce
from legdga import chekanov as ch
from legdga import diagram as dg
from legdga import gluing as gl
from legdga.ncalg import DGA, Algebra, Generator, Zmod, apply_derivation


def unit_dga():
    A = Algebra([Generator("c", 1)])
    return DGA(A, {"c": A.one()})


def needs_length_two():
    # d x = 1 - r t and d s = t, so x - r s is a witness but no single letter is
    A = Algebra([Generator("x", 1), Generator("r", 1), Generator("s", 0), Generator("t", -1)])
    return DGA(A, {"x": A.one() - A.word("r", "t"), "s": A.gen("t")})


def test_simple_witness():
    w = ce.find_unit_witness(unit_dga())
    assert w is not None and w.element == unit_dga().gen("c")
    assert not ce.has_zero_augmentation(unit_dga())


def test_longer_witness():
    A = needs_length_two()
    assert ce.find_unit_witness(A, max_len=1) is None
    w = ce.find_unit_witness(A, max_len=2)
    assert apply_derivation(A.diff, w.element) == 1
    assert w.element == A.gen("x") - A.algebra.word("r", "s")


def test_witness_over_finite_field():
    A = needs_length_two().reduce(Zmod(3))
    w = ce.find_unit_witness(A, max_len=2)
    assert w is not None and w.verify(A)


def test_budget_and_bad_length():
    with pytest.raises(ce.CertifyError, match="budget"):
        ce.find_unit_witness(needs_length_two(), max_len=3, budget=10)
    with pytest.raises(ce.CertifyError):
        ce.find_unit_witness(unit_dga(), max_len=0)


def test_unknot():
    U = ch.build_dga(dg.parse("L1; R1"))
    assert ce.has_zero_augmentation(U)
    H = ce.linearized_homology(U, au.Augmentation({}))
    assert H.ranks == {1: 1}


def test_linearized_946(K, stored_eps):
    for e in stored_eps.values():
        H = ce.linearized_homology(K, e)
        assert H.nonzero() == {1: 1}
        assert not any(H.torsion.values())
        H2 = ce.linearized_homology(K.reduce(Zmod(2)), e.reduce(Zmod(2)))
        assert H2.nonzero() == {1: 1}


def test_linearized_rejects_bad_augmentation(K):
    with pytest.raises(ce.CertifyError):
        ce.linearized_homology(K, au.Augmentation({"c0": 1, "c1": 1}))


def test_linear_part_of_trefoil():
    A = ch.build_dga(dg.parse("L1; L3; X2; X2; X2; R1; R1"))
    e = au.enumerate_augmentations(A)[0]
    d1 = ce.linear_part(A, e)
    assert set(d1) == {g.name for g in A.generators}
    H = ce.linearized_homology(A, e)
    # the trefoil's linearized homology has Poincare polynomial t + 2
    assert H.nonzero() == {0: 2, 1: 1}


def test_verdicts(K, stored_eps, A_arc, arc_eps):
    e0, e1 = stored_eps["eps0"], stored_eps["eps1"]
    trivial = gl.glue(gl.GluedSpec(K, e0, e1))
    v = ce.certify(trivial)
    assert v.status == "trivial"
    assert v.witness.element == -e0("c0") * trivial.gen("c0^")
    for e in (e0, e1):
        v = ce.certify(gl.glue(gl.GluedSpec(K, e, e)))
        assert v.status == "nontrivial"
    spun = gl.spin(gl.GluedSpec(A_arc, arc_eps["eps0"], arc_eps["eps1"], 3))
    assert ce.certify(spun).to_json()["verdict"] == "trivial"


def test_certify_finds_augmentation():
    # no zero augmentation, but x -> 1 is one
    A = Algebra([Generator("x", 0), Generator("y", 1)])
    D = DGA(A, {"y": A.one() - A.gen("x")})
    v = ce.certify(D)
    assert v.status == "nontrivial" and v.augmentation("x") == 1


def test_inconclusive():
    A = Algebra([Generator("x", 0), Generator("y", 1)])
    D = DGA(A, {"y": A.one() + A.word("x", "x")})
    assert ce.certify(D).status == "inconclusive"


def test_certificates_exclusive(K, stored_eps, A_arc, arc_eps):
    dgas = [K, A_arc, ch.build_dga(dg.parse("L1; L3; X2; X2; X2; R1; R1")), unit_dga(),
            needs_length_two()]
    for F in ("eps0", "eps1"):
        for G in ("eps0", "eps1"):
            dgas.append(gl.glue(gl.GluedSpec(K, stored_eps[F], stored_eps[G])))
            dgas.append(gl.spin(gl.GluedSpec(A_arc, arc_eps[F], arc_eps[G], 2)))
    for A in dgas:
        w = ce.find_unit_witness(A, max_len=2)
        assert not (ce.has_zero_augmentation(A) and w is not None)
