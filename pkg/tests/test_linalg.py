from fractions import Fraction as F

from leibniz_gsb.linalg import RowSpace, coordinates, intersection, rank


def test_rank_of_sparse_rows():
    assert rank([{"u": 1, "v": 1}, {"u": 2, "v": 2}, {"w": F(1, 2)}]) == 2
    assert rank([]) == 0


def test_row_space_reduce_vanishes_on_pivots():
    space = RowSpace([{"u": 1, "v": 1}, {"v": 1, "w": 1}])
    assert space.dimension == 2
    assert space.contains({"u": 1, "v": 2, "w": 1})
    rest = space.reduce({"u": 1})
    assert all(k not in rest for k in space.pivots)
    assert rest


def test_coordinates():
    rows = [[F(1), F(0), F(1)], [F(0), F(1), F(1)]]
    assert coordinates(rows, [F(2), F(3), F(5)]) == [F(2), F(3)]
    assert coordinates(rows, [F(1), F(0), F(0)]) is None


def test_intersection_of_planes():
    a = [[F(1), F(0), F(0)], [F(0), F(1), F(0)]]
    b = [[F(0), F(1), F(0)], [F(0), F(0), F(1)]]
    assert intersection(a, b, 3) == [[F(0), F(1), F(0)]]
    assert intersection(a, [], 3) == []
