import random

import pytest

from gridhf.homalg import (
    GradedComplexF2U, ChainMap, Hyperbox, NotAComplex, compress, cone_tensor,
    homology_ranks, tower_table, stable_tower_report, UnsupportedDimension,
)


def single_gen_complex():
    return GradedComplexF2U(["g"], [0], [('u', 0)])


def two_gen_u_complex():
    # d(a) = U b
    cx = GradedComplexF2U(["a", "b"], [0, 2], [('u', 0)])
    cx.add_diff(0, 1, (1,))
    return cx


def test_zero_diff_tower():
    cx = single_gen_complex()
    assert tower_table(cx, 3) == [(0, None)]
    assert homology_ranks(cx, 3) == {0: 1, -4: 1, -8: 1}


def test_u_arrow_tower():
    cx = two_gen_u_complex()
    cx.check_d_squared()
    cx.check_grading()
    towers, stable = stable_tower_report(cx, 2)
    assert towers == [(2, 1)] and stable
    # the raw table at one cutoff also carries a truncation echo far below
    raw = tower_table(cx, 2)
    assert (2, 1) in raw and all(g < -2 for g, _ in raw if (g, _) != (2, 1))


def test_not_a_complex_detected():
    cx = GradedComplexF2U(["a", "b", "c"], [0, -2, -4], [])
    cx.add_diff(0, 1, ())
    cx.add_diff(1, 2, ())
    with pytest.raises(NotAComplex):
        cx.check_d_squared()


def test_cone_tensor_shapes():
    cx = single_gen_complex()
    assert len(cone_tensor(cx, []).gens) == 1
    two = cone_tensor(cx, [(0, 0)])
    # k=1 on a rank-1 complex: 2 generators, connecting terms U+U = 0
    assert len(two.gens) == 2
    assert all(not row for row in two.diff)
    cx2 = GradedComplexF2U(["g"], [0], [('u', 0), ('u', 1)])
    cone = cone_tensor(cx2, [(0, 1)])
    assert len(cone.gens) == 2
    terms = sum(len(m) for row in cone.diff for m in row.values())
    assert terms == 2
    cone.check_d_squared()
    cone.check_grading()
    # with the two variables identified the connecting map dies: one tower
    # of each length... both gens survive
    assert sorted(tower_table(cone, 3), key=str) == [(0, None), (2, None)]


def random_complex(rng, ngens=5, nvars=1):
    gr2 = [2 * rng.randrange(-2, 3) for _ in range(ngens)]
    cx = GradedComplexF2U(list(range(ngens)), gr2, [('u', i) for i in range(nvars)])
    # build a valid differential: d = strictly lower triangular with d2=0
    # easiest: take d = sum of a few "elementary" maps e_ij with matching
    # gradings and square-zero supports
    pairs = []
    for i in range(ngens):
        for j in range(ngens):
            # a term U^p * gen_j in d(gen_i) needs gr2[i] = gr2[j] - 4p + 2
            drop = cx.gr2[i] - cx.gr2[j]
            if i != j and drop <= 2 and (2 - drop) % 4 == 0:
                pairs.append((i, j, (2 - drop) // 4))
    rng.shuffle(pairs)
    used_src, used_tgt = set(), set()
    for (i, j, p) in pairs:
        if i in used_src or i in used_tgt or j in used_src or j in used_tgt:
            continue
        mono = [0] * nvars
        if nvars:
            mono[rng.randrange(nvars)] = p
        if p and not nvars:
            continue
        cx.add_diff(i, j, tuple(mono))
        used_src.add(i)
        used_tgt.add(j)
    cx.check_d_squared()
    cx.check_grading()
    return cx


def random_chain_map(rng, src, dst):
    """A chain map f: src -> dst of degree 0 built as d h + h d for random h."""
    h = ChainMap.zero(src, dst, degree2=2)
    for i in range(len(src.gens)):
        for j in range(len(dst.gens)):
            lift = dst.gr2[j] - src.gr2[i] - 2
            if lift >= 0 and lift % 4 == 0 and rng.random() < 0.4:
                mono = [0] * dst.nvars
                if lift:
                    if not dst.nvars:
                        continue
                    mono[rng.randrange(dst.nvars)] = lift // 4
                h.add_entry(i, j, tuple(mono))
    return h.commutator_with_d(), h


def test_hyperbox_check_single_complex():
    cx = two_gen_u_complex()
    box = Hyperbox((), {(): cx}, {})
    assert box.check()


def test_square_of_chain_maps_checks():
    rng = random.Random(7)
    cx = random_complex(rng)
    ident = ChainMap.identity(cx)
    box = Hyperbox((1, 1), {eps: cx for eps in box_eps()},
                   {((0, 0), (1, 0)): ident, ((0, 1), (1, 0)): ident,
                    ((0, 0), (0, 1)): ident, ((1, 0), (0, 1)): ident})
    assert box.check()


def box_eps():
    return [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_compress_1d_composition():
    rng = random.Random(3)
    cx = random_complex(rng)
    f, _ = random_chain_map(rng, cx, cx)
    box = Hyperbox((3,), {(i,): cx for i in range(4)},
                   {((i,), (1,)): f for i in range(3)})
    assert box.check()
    cube = compress(box)
    expect = f.compose(f).compose(f)
    got = cube.maps[((0,), (1,))]
    assert all(a == b for a, b in zip(got.entries, expect.entries))


def test_compress_2d_random_hyperboxes():
    rng = random.Random(11)
    for trial in range(8):
        d1, d2 = rng.randrange(1, 4), rng.randrange(1, 4)
        cx = random_complex(rng, ngens=6)
        f, _ = random_chain_map(rng, cx, cx)
        g, _ = random_chain_map(rng, cx, cx)
        # build a genuine hyperbox: edges f (axis 0) and g (axis 1), with a
        # diagonal making each face a chain homotopy between fg and gf
        diag, hh = random_chain_map(rng, cx, cx)
        # need D(1,1) with d-commutator = f g + g f; take h random and set
        # diag = homotopy witness only when f, g commute: use g = f
        g = f
        comps = {}
        maps = {}
        for a in range(d1 + 1):
            for b in range(d2 + 1):
                comps[(a, b)] = cx
        for a in range(d1):
            for b in range(d2 + 1):
                maps[((a, b), (1, 0))] = f
        for a in range(d1 + 1):
            for b in range(d2):
                maps[((a, b), (0, 1))] = f
        box = Hyperbox((d1, d2), comps, maps)
        assert box.check()
        cube = compress(box)
        assert cube.check()


def test_compress_rejects_dimension_3():
    cx = single_gen_complex()
    comps = {eps: cx for eps in
             [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)]}
    box = Hyperbox((1, 1, 1), comps, {})
    with pytest.raises(UnsupportedDimension):
        compress(box)
