import pytest
from hypothesis import given, settings, strategies as st

from legdga import augment as au
from legdga import chekanov as ch
from legdga import data_path
from legdga import diagram as dg
from legdga import gluing as gl
from legdga.ncalg import DGA, Algebra, Generator, NCPoly, Zmod, check_d_squared

F2 = Zmod(2)
BASE = Algebra([Generator("x", 0), Generator("y", 1), Generator("z", 0), Generator("w", -1)])
HATS = Algebra([Generator(n + "^", d + 1) for n, d in
                [("x", 0), ("y", 1), ("z", 0), ("w", -1)]])
TILDES = Algebra(list(HATS.generators) + [Generator(n + "~", d + 3) for n, d in
                                          [("x", 0), ("y", 1), ("z", 0), ("w", -1)]])

eps_values = st.fixed_dictionaries({"x": st.integers(-2, 2), "z": st.integers(-2, 2)})
words = st.lists(st.sampled_from(["x", "y", "z", "w"]), max_size=4).map(tuple)
polys = st.dictionaries(words, st.integers(-3, 3), max_size=4).map(lambda t: NCPoly(BASE, t))


def test_omega_small_cases():
    F, G = au.Augmentation({"x": 2}), au.Augmentation({"x": 3, "z": 5})
    assert gl.omega(F, G, BASE.one(), HATS).is_zero()
    assert gl.omega(F, G, 7 * BASE.one(), HATS).is_zero()
    assert gl.omega(F, G, BASE.gen("y"), HATS) == HATS.gen("y^")
    # m = 2: c1^ eps_G(c2) + (-1)^|c1| eps_F(c1) c2^
    assert gl.omega(F, G, BASE.word("x", "z"), HATS) == 5 * HATS.gen("x^") + 2 * HATS.gen("z^")
    assert gl.omega(F, G, BASE.word("y", "x"), HATS) == 3 * HATS.gen("y^")
    assert gl.omega(F, G, BASE.word("x", "y"), HATS) == 2 * HATS.gen("y^")


@settings(max_examples=300, deadline=None)
@given(eps_values, eps_values, polys, polys, st.integers(-3, 3))
def test_omega_linear(fv, gv, p, q, k):
    F, G = au.Augmentation(fv), au.Augmentation(gv)
    om = lambda r: gl.omega(F, G, r, HATS)
    assert om(p + q) == om(p) + om(q)
    assert om(k * p) == k * om(p)


@settings(max_examples=300, deadline=None)
@given(eps_values, eps_values, st.sampled_from("xyzw"), st.sampled_from("xyzw"))
def test_omega_closed_forms(fv, gv, c1, c2):
    F, G = au.Augmentation(fv), au.Augmentation(gv)
    assert gl.omega(F, G, BASE.gen(c1), HATS) == HATS.gen(c1 + "^")
    expect = (HATS.gen(c1 + "^") * G(c2)
              + (-1) ** (BASE.degree(c1) % 2) * F(c1) * HATS.gen(c2 + "^"))
    assert gl.omega(F, G, BASE.word(c1, c2), HATS) == expect


def test_gamma_tilde():
    x, y = HATS.gen("x^"), HATS.gen("y^")
    T = TILDES
    assert gl.gamma_tilde(HATS.one(), T).is_zero()
    assert gl.gamma_tilde(x, T) == T.gen("x~")
    # |x^| = 1: Gamma(x^ y^) = x~ y^ - x^ y~
    assert gl.gamma_tilde(x * y, T) == T.word("x~", "y^") - T.word("x^", "y~")
    # |y^| = 2
    assert gl.gamma_tilde(y * x, T) == T.word("y~", "x^") + T.word("y^", "x~")


def test_gamma_on_linear_differential():
    # for linear d^ the formula is the same linear combination of tildes
    p = 2 * HATS.gen("x^") - HATS.gen("z^")
    assert gl.gamma_tilde(p, TILDES) == 2 * TILDES.gen("x~") - TILDES.gen("z~")


def test_glue_unknot():
    U = ch.build_dga(dg.parse("L1; R1"))
    zero = au.Augmentation({})
    G = gl.glue(gl.GluedSpec(U, zero, zero))
    assert [(g.name, g.degree) for g in G.generators] == [("r2^", 2)]
    assert G.d("r2^").is_zero()


def test_glue_946(K, stored_eps):
    e0, e1 = stored_eps["eps0"], stored_eps["eps1"]
    G = gl.glue(gl.GluedSpec(K, e0, e1))
    for g in K.generators:
        assert G.degree(gl.hat(g.name)) == g.degree + 1
    assert G.d("c0^") == -e0("c0") * G.algebra.one()
    for e in (e0, e1):
        same = gl.glue(gl.GluedSpec(K, e, e))
        assert all(same.d(g.name).constant_term() == 0 for g in same.generators)


def test_glue_rejects_non_augmentation(K):
    with pytest.raises(au.AugmentationError):
        gl.glue(gl.GluedSpec(K, au.Augmentation({"c0": 1, "c1": 1}), au.Augmentation({})))


def test_glue_commutes_with_reduction(K, stored_eps):
    spec = gl.GluedSpec(K, stored_eps["eps0"], stored_eps["eps1"])
    assert gl.glue(spec).reduce(F2) == gl.glue(spec.reduce(F2))
    assert ch.build_dga(dg.load(data_path("k946.front")), F2) == K.reduce(F2)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("pair", [("eps0", "eps1"), ("eps0", "eps0"), ("eps1", "eps1")])
def test_spin(A_arc, arc_eps, n, pair):
    spec = gl.GluedSpec(A_arc, arc_eps[pair[0]], arc_eps[pair[1]], n)
    S = gl.spin(spec)
    assert check_d_squared(S)[0]
    base = [g for g in A_arc.generators if g.name != "a"]
    assert len(S.generators) == 2 * len(base) + 1
    for g in base:
        assert S.degree(gl.hat(g.name)) == g.degree + 1
        assert S.degree(gl.tilde(g.name)) == g.degree + n
    assert S.degree("b^") == 1 and S.degree("b~") == n and S.degree("a") == n
    assert S.d("a") == S.gen("b~")
    assert S.d("b~").is_zero()
    assert gl.hat_closed(S) and gl.tilde_ideal_closed(S)
    # the hat part is the glued arc DGA
    glued = gl.glue(gl.GluedSpec(A_arc, spec.eps_F, spec.eps_G))
    for g in base:
        assert dict(S.d(gl.hat(g.name)).terms) == dict(glued.d(gl.hat(g.name)).terms)
    assert S.reduce(F2) == gl.spin(spec.reduce(F2))


def test_spin_needs_neck_value(A_arc, arc_eps):
    bad = au.Augmentation({k: v for k, v in arc_eps["eps0"].values.items() if k != "b"})
    with pytest.raises((gl.GluingError, au.AugmentationError)):
        gl.spin(gl.GluedSpec(A_arc, bad, arc_eps["eps1"], 2))
    with pytest.raises(gl.GluingError):
        gl.spin(gl.GluedSpec(A_arc, arc_eps["eps0"], arc_eps["eps1"], 1))


def test_spin_needs_arc(K, stored_eps):
    with pytest.raises(gl.GluingError, match="arc"):
        gl.spin(gl.GluedSpec(K, stored_eps["eps0"], stored_eps["eps1"], 2))


def test_bad_square_is_reported():
    A = Algebra([Generator("x", 0), Generator("y", 1), Generator("u", 2)])
    # d^2 u = d(y) = x != 0, fed in unchecked
    D = DGA(A, {"y": A.gen("x"), "u": A.gen("y")})
    with pytest.raises(gl.DSquaredError):
        gl.glue(gl.GluedSpec(D, au.Augmentation({}), au.Augmentation({})))


def test_load_spec_files():
    spec = gl.load_spec(data_path("spin01.json"))
    assert spec.spin_n == 2 and spec.eps_F("b") == 1
    glued = gl.load_spec(data_path("glue00.json"))
    assert glued.spin_n is None and glued.eps_F == glued.eps_G


def test_load_spec_errors(tmp_path):
    p = tmp_path / "s.json"
    p.write_text("{not json")
    with pytest.raises(gl.GluingError):
        gl.load_spec(p)
    p.write_text('{"base": "x.front"}')
    with pytest.raises(gl.GluingError, match="eps_F"):
        gl.load_spec(p)
