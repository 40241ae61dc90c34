import pytest

from gridhf import corpus
from gridhf.griddiag import (
    GridDiagram, DuplicateMarking, FreeMarkingRule, validate, is_sparse,
    sparse_double, destabilize_diagram, linking_matrix, marking_set,
    whole_sublink_markings, Marking, InconsistentMarkingSet,
)


def test_validate_unknot2():
    g = validate("grid n=2 q=0\nO: 1 2\nX: 2 1\n")
    assert g.n == 2 and g.ell == 1 and g.q == 0


def test_validate_rejects_duplicate_row():
    with pytest.raises(DuplicateMarking):
        validate("grid n=2 q=0\nO: 1 1\nX: 2 -\n")


def test_free_marking_rule():
    # column 0 has an X but row 2 (its O's row) has none
    with pytest.raises(FreeMarkingRule):
        GridDiagram([2, 0, 1], [1, None, None])


def test_roundtrip_serialization():
    for name, g in corpus.named().items():
        g2 = validate(g.serialize())
        assert g2.o_row == g.o_row and g2.x_row == g.x_row, name
        assert g2.serialize() == g.serialize()


def test_sparse_double_shapes():
    g = corpus.unknot2()
    d = sparse_double(g)
    assert d.n == 4 and d.q == g.q + g.n and d.ell == g.ell
    assert is_sparse(d)
    h = corpus.hopf4()
    hd = sparse_double(h)
    assert hd.n == 8 and hd.q == 4 and hd.ell == 2
    assert is_sparse(hd)
    assert not is_sparse(h)
    assert not is_sparse(g)
    # doubling a sparse diagram gives a larger sparse diagram
    dd = sparse_double(d)
    assert dd.n == 8 and is_sparse(dd)


def test_sparse_double_preserves_linking():
    for g in (corpus.hopf4(), corpus.unlink5()):
        lk1 = linking_matrix(g).lk
        lk2 = linking_matrix(sparse_double(g)).lk
        assert lk1 == lk2


def test_linking_numbers():
    assert linking_matrix(corpus.unknot2()).lk == ((0,),)
    assert linking_matrix(corpus.unlink5()).lk == ((0, 0), (0, 0))
    lk = linking_matrix(corpus.hopf4()).lk
    assert abs(lk[0][1]) == 1 and lk[0][1] == lk[1][0]
    # reversing one component flips the sign
    h = corpus.hopf4()
    h2 = GridDiagram(h.o_row, h.x_row, orient=(1, -1))
    assert linking_matrix(h2).lk[0][1] == -lk[0][1]


def test_destabilize_whole_component():
    g = corpus.unknot4_sparse()
    z = whole_sublink_markings(g, [0], [1])
    d, col_map, row_map = destabilize_diagram(g, z)
    assert d.n == 2 and d.ell == 0 and d.q == 2
    # inherited free variables
    assert set(d.var_of_o) == {('f', 0), ('f', 1)}
    assert d.var_universe == g.var_universe


def test_destabilize_negative_orientation():
    # rows/columns of the X's coincide with those of the O's, so a whole
    # component always disappears entirely
    g = corpus.unknot4_sparse()
    z = whole_sublink_markings(g, [0], [-1])
    d, _, _ = destabilize_diagram(g, z)
    assert d.n == 2 and d.ell == 0
    assert set(d.var_of_o) == {('f', 0), ('f', 1)}


def test_partial_destabilization_keeps_component_variable():
    # removing one of the two O's of the unknot component leaves the other
    # one as a newly free marking carrying the component variable
    g = corpus.unknot4_sparse()
    z = marking_set(g, [g.o_markings(0)[0]])
    d, _, _ = destabilize_diagram(g, z)
    assert d.n == 3 and d.ell == 0 and d.q == 3
    assert ('c', 0) in d.var_of_o


def test_destabilize_sublink_of_hopf():
    g = corpus.hopf8_sparse()
    z = whole_sublink_markings(g, [0], [1])
    d, _, _ = destabilize_diagram(g, z)
    assert d.ell == 1 and d.n == 6
    assert linking_matrix(d).lk == ((0,),)


def test_empty_marking_set_is_identity():
    g = corpus.unknot4_sparse()
    d, col_map, row_map = destabilize_diagram(g, marking_set(g, []))
    assert d.o_row == g.o_row and d.x_row == g.x_row


def test_inconsistent_marking_set():
    g = corpus.hopf8_sparse()
    o = g.o_markings(0)[0]
    x = g.x_markings(0)[0]
    with pytest.raises(InconsistentMarkingSet):
        marking_set(g, [o, x])


def test_degenerate_one_by_one():
    g = GridDiagram([0], [None])
    assert g.n == 1 and g.q == 1 and g.ell == 0
