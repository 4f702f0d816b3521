import threading

import pytest

from witt.errors import TableLimitExceeded
from witt.polytable import UniversalPolyTable, build_table, evaluate, get_table, table_stats
from witt.rings import Integers, IntegersModM


@pytest.fixture
def table():
    return UniversalPolyTable(limit=6)


def test_low_degree_polynomials(table):
    x, y = table.x, table.y
    assert table.sigma(1) == x(1) + y(1)
    assert table.sigma(2) == x(2) + y(2) - x(1) * y(1)
    assert table.pi(2) == x(1) ** 2 * y(2) + x(2) * y(1) ** 2 + 2 * x(2) * y(2)
    assert table.frobenius(2, 1) == x(1) ** 2 + 2 * x(2)


def test_limit(table):
    with pytest.raises(TableLimitExceeded):
        table.sigma(7)
    with pytest.raises(TableLimitExceeded):
        table.frobenius(2, 4)


def test_entries_have_integer_coefficients(table):
    for n in range(1, 7):
        for poly in table.build(n).values():
            assert all(int(c) == c for c in poly.coeffs())


def test_evaluate_skips_zero_variables(table):
    values = [None] * (2 * table.limit)
    values[table.x_index(1)] = 3
    values[table.y_index(1)] = 5
    assert evaluate(table.sigma(2), values, Integers()).payload == -15
    assert evaluate(table.sigma(2), values, IntegersModM(4)).payload == 1


def test_concurrent_builds_agree(table):
    results = []

    def build():
        results.append(table.pi(6))

    threads = [threading.Thread(target=build) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert all(r == results[0] for r in results)
    assert table.stats()["entries"] >= 4


def test_shared_table_stats():
    build_table(3)
    stats = table_stats()
    assert stats["entries"] >= 6
    assert stats["limit"] == get_table().limit


def test_check_limit(table):
    table.check_limit(6)
    with pytest.raises(TableLimitExceeded):
        table.check_limit(13)
