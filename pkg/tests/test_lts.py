from fractions import Fraction

import numpy as np
import pytest

from triplekit import numerics as nx
from triplekit import lts as lt
from triplekit import fixtures as fx

from oracles import (
    antisymmetry_defect_loops,
    cyclic_defect_loops,
    derivation_defect_loops,
    sphere_bracket_direct,
    triple_bracket_loops,
)

SEED = 42


def random_rational_tensor(rng, d):
    t = nx.zeros((d, d, d, d), nx.RATIONAL)
    for i in range(d):
        for j in range(d):
            for k in range(d):
                for l in range(d):
                    t[i, j, k, l] = Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 4)))
    return t


def test_defect_contractions_match_loop_oracle():
    # validates the tensor-contraction implementation of all three identities
    # against naked quintuple loops on random tensors
    rng = np.random.default_rng(SEED)
    for _ in range(5):
        t = random_rational_tensor(rng, 3)
        m = lt.LieTripleSystem(3, t, nx.RATIONAL)
        c = m.tensor
        anti = nx.max_abs(c + c.transpose(1, 0, 2, 3))
        assert anti == antisymmetry_defect_loops(c)
        cyc = nx.max_abs(c + c.transpose(2, 0, 1, 3) + c.transpose(1, 2, 0, 3))
        assert cyc == cyclic_defect_loops(c)
        report = lt.verify_axioms(m)
        worst_oracle = max(antisymmetry_defect_loops(c), cyclic_defect_loops(c),
                           derivation_defect_loops(c))
        assert report.worst_violation == worst_oracle


def test_bracket_eval_matches_loops():
    rng = np.random.default_rng(SEED)
    m = fx.sphere_lts(3)
    for _ in range(10):
        x, y, z = (nx.rational_array(list(rng.integers(-4, 5, size=3))) for _ in range(3))
        got = lt.bracket_eval(m, x, y, z)
        want = triple_bracket_loops(m.tensor, x, y, z)
        assert all(a == b for a, b in zip(got, want))


def test_sphere_bracket_frozen_values():
    # direct expansion: bracket(e1,e2,e2) = <e2,e2> e1 - <e1,e2> e2 = e1
    #                   bracket(e1,e2,e1) = <e2,e1> e1 - <e1,e1> e2 = -e2
    m = fx.sphere_lts(3)
    e = nx.identity(3, nx.RATIONAL)
    assert list(lt.bracket_eval(m, e[0], e[1], e[1])) == [1, 0, 0]
    assert list(lt.bracket_eval(m, e[0], e[1], e[0])) == [0, -1, 0]
    rng = np.random.default_rng(SEED)
    for _ in range(10):
        x, y, z = (nx.rational_array(list(rng.integers(-3, 4, size=3))) for _ in range(3))
        want = sphere_bracket_direct(x, y, z)
        got = lt.bracket_eval(m, x, y, z)
        assert all(a == b for a, b in zip(got, want))


@pytest.mark.parametrize("name", ["abelian2", "sphere2", "sphere3", "sphere4",
                                  "u2_minus", "u3_minus"])
def test_gallery_systems_satisfy_axioms(name):
    m = fx.lts_gallery()[name]
    report = lt.verify_axioms(m)
    assert report.ok, (name, report)


def test_broken_tensor_reported_with_witness():
    bad = fx.broken_lts()
    report = lt.verify_axioms(bad)
    assert not report.ok
    assert report.worst_violation > 0
    assert report.identity == "left_antisymmetry"
    assert report.witness is not None


def test_center_sphere_trivial():
    z = lt.center(fx.sphere_lts(3))
    assert z.dim == 0


def test_center_abelian_everything():
    z = lt.center(fx.abelian_lts(3))
    assert z.dim == 3


def test_center_u2_minus_is_scalar_line():
    # center of i*Sym(2) is the span of i*I, which has coordinates (1, 1, 0)
    # in the basis (i*E11, i*E22, i*(E12+E21))
    m = fx.u_minus_lts(2)
    z = lt.center(m)
    assert z.dim == 1
    v = z.basis[0]
    assert v[0] == v[1] and v[0] != 0 and v[2] == 0


def test_subsystem_not_ideal_in_sphere():
    m = fx.sphere_lts(3)
    sub = lt.subspace_from_vectors(3, [nx.rational_array([1, 0, 0]),
                                       nx.rational_array([0, 1, 0])], nx.RATIONAL)
    assert lt.is_subsystem(m, sub)
    # bracket(e1, e3, e1) = -e3 escapes span{e1, e2}
    assert not lt.is_ideal(m, sub)


def test_center_is_ideal_u2_minus():
    m = fx.u_minus_lts(2)
    z = lt.center(m)
    assert lt.is_ideal(m, z)


def test_quotient_by_center():
    m = fx.u_minus_lts(2)
    z = lt.center(m)
    q, proj = lt.quotient(m, z)
    assert q.dim == 2
    assert proj.certified
    assert lt.verify_axioms(q).ok
    # representative independence: shifting the input by a central vector
    # does not move the projection
    rng = np.random.default_rng(SEED)
    for _ in range(10):
        x = nx.rational_array(list(rng.integers(-4, 5, size=3)))
        shift = z.basis[0] * Fraction(int(rng.integers(-3, 4)))
        a = proj.matrix @ x
        b = proj.matrix @ (x + shift)
        assert all(p == q_ for p, q_ in zip(a, b))


def test_quotient_rejects_non_ideal():
    m = fx.sphere_lts(3)
    sub = lt.subspace_from_vectors(3, [nx.rational_array([1, 0, 0]),
                                       nx.rational_array([0, 1, 0])], nx.RATIONAL)
    with pytest.raises(lt.NotAnIdealError):
        lt.quotient(m, sub)


def test_direct_product_blocks_and_mode_guard():
    a = fx.sphere_lts(2)
    b = fx.u_minus_lts(2)
    prod = lt.direct_product(a, b)
    assert prod.dim == 5
    assert lt.verify_axioms(prod).ok
    z = lt.center(prod)
    assert z.dim == 1  # sphere contributes nothing, u2 part its scalar line
    with pytest.raises(lt.ModeMismatchError):
        lt.direct_product(a, b.to_float())


def test_grid_dimensions_and_axioms():
    base = fx.u_minus_lts(2)
    path = lt.grid_path_system(base, 4, lt.PATH_ZERO_AT_START)
    assert path.system.dim == 3 * base.dim
    loop = lt.grid_path_system(base, 4, lt.LOOP_ZERO_AT_BOTH_ENDS)
    assert loop.system.dim == 2 * base.dim
    assert lt.verify_axioms(loop.system).ok
    with pytest.raises(lt.LtsStructureError):
        lt.grid_path_system(base, 2, lt.LOOP_ZERO_AT_BOTH_ENDS)
    with pytest.raises(lt.LtsStructureError):
        lt.grid_path_system(base, 1, lt.PATH_ZERO_AT_START)


def test_grid_center_is_nodewise_center():
    base = fx.u_minus_lts(2)
    for t in (3, 4, 5):
        loop = lt.grid_path_system(base, t, lt.LOOP_ZERO_AT_BOTH_ENDS)
        z_grid = lt.center(loop.system)
        z_base = lt.center(base)
        embedded = lt.grid_node_embedding(loop, z_base)
        assert z_grid.equals(embedded)


def test_doubling_map_not_a_morphism():
    # scaling by 2 multiplies the trilinear bracket by 8, not 2
    m = fx.sphere_lts(3)
    f = lt.LtsMorphism(m, m, nx.identity(3, nx.RATIONAL) * Fraction(2))
    assert not lt.certify_morphism(f).certified
    ident = lt.LtsMorphism(m, m, nx.identity(3, nx.RATIONAL))
    assert lt.certify_morphism(ident).certified


def test_dimension_cap():
    with pytest.raises(lt.LtsStructureError):
        lt.LieTripleSystem(33, nx.zeros((33,) * 4, nx.RATIONAL), nx.RATIONAL)
