import pytest

from multiexam.seating import SeatingChart, auto_chart, neighbor_pairs, neighbors, row_major


def king_degree(rows, cols, r, c):
    return sum(
        1
        for dr in (-1, 0, 1)
        for dc in (-1, 0, 1)
        if (dr or dc) and 1 <= r + dr <= rows and 1 <= c + dc <= cols
    )


def test_full_5x8_hall_degrees():
    chart = row_major(5, 8, 40)
    assert len(neighbors(chart, chart.exam_at(3, 4))) == 8
    for corner in [(1, 1), (1, 8), (5, 1), (5, 8)]:
        assert len(neighbors(chart, chart.exam_at(*corner))) == 3
    for edge in [(1, 4), (5, 5), (3, 1), (2, 8)]:
        assert len(neighbors(chart, chart.exam_at(*edge))) == 5


def test_seat_34_neighbours_are_the_surrounding_cells():
    chart = row_major(5, 8, 40)
    expected = sorted(chart.exam_at(r, s) for r in (2, 3, 4) for s in (3, 4, 5) if (r, s) != (3, 4))
    assert neighbors(chart, chart.exam_at(3, 4)) == expected


@pytest.mark.parametrize("n,side", [(1, 1), (2, 2), (4, 2), (5, 3), (10, 4), (16, 4), (17, 5), (100, 10), (450, 22)])
def test_auto_chart_side(n, side):
    chart = auto_chart(n)
    assert (chart.rows, chart.seats_per_row) == (side, side)
    assert chart.exams == n


def test_auto_chart_single_exam():
    chart = auto_chart(1)
    assert chart.seat_of(1) == (1, 1)
    assert neighbors(chart, 1) == []
    assert neighbor_pairs(chart) == []


def test_row_major_is_a_bijection_onto_first_seats():
    chart = row_major(3, 4, 10)
    seats = [chart.seat_of(i) for i in range(1, 11)]
    assert seats == [(r, s) for r in range(1, 4) for s in range(1, 5)][:10]
    assert chart.exam_at(3, 3) is None


@pytest.mark.parametrize("rows,cols,n,pairs", [(1, 2, 2, 1), (2, 2, 4, 6)])
def test_small_pair_counts(rows, cols, n, pairs):
    assert len(neighbor_pairs(row_major(rows, cols, n))) == pairs


def test_5x8_pair_count_matches_king_graph():
    chart = row_major(5, 8, 40)
    total_degree = sum(king_degree(5, 8, r, c) for r in range(1, 6) for c in range(1, 9))
    pairs = neighbor_pairs(chart)
    assert len(pairs) == total_degree // 2
    assert len(set(pairs)) == len(pairs)
    assert all(i < j for i, j in pairs)
    assert pairs == sorted(pairs)


@pytest.mark.parametrize("rows,cols,n", [(4, 4, 10), (22, 21, 450), (3, 5, 15), (1, 7, 5)])
def test_adjacency_symmetric_and_irreflexive(rows, cols, n):
    chart = row_major(rows, cols, n)
    for i in range(1, n + 1):
        ns = neighbors(chart, i)
        assert i not in ns
        for j in ns:
            assert i in neighbors(chart, j)


def test_partial_last_row_yields_no_pairs_to_empty_seats():
    chart = auto_chart(10)  # 4x4 with exams in rows 1-2 and two seats of row 3
    assert neighbors(chart, 10) == [5, 6, 7, 9]


def test_unknown_exam_raises():
    with pytest.raises(KeyError):
        neighbors(auto_chart(4), 5)


@pytest.mark.parametrize(
    "rows,cols,seats",
    [(0, 3, ()), (1, 1, ((1, 1), (1, 1))), (2, 2, ((3, 1),)), (1, 1, ((1, 1), (1, 2)))],
)
def test_invalid_charts(rows, cols, seats):
    with pytest.raises(ValueError):
        SeatingChart(rows, cols, seats)
