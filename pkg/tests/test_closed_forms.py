import pytest

from app.errors import InvalidParameterError
from app.tables import (
    REFERENCE_ENUMERATORS,
    TableKind,
    enumerator_string,
    expected_moments,
    minimum_distance,
    moment_sums,
    solve_frequency_system,
    table1,
    table2,
    table3,
    weight_for_value,
)


def test_value_table_c351():
    table = table1(3, 5)
    assert table.kind == TableKind.VALUES
    assert table.rows == (
        (243, 1),
        (0, 9740258),
        (27, 2548260),
        (-27, 2038608),
        (81, 14520),
        (-81, 7260),
    )
    assert table.total() == 3 ** 15
    assert table.nonzero_total() == 3 ** 15 - 1


@pytest.mark.parametrize("p, m, k", sorted(REFERENCE_ENUMERATORS))
def test_weight_tables_reproduce_examples(p, m, k):
    assert table2(p, m).as_dict() == REFERENCE_ENUMERATORS[(p, m, k)]


@pytest.mark.parametrize("p, m", [(3, 5), (3, 7), (5, 5), (7, 5), (3, 9)])
def test_general_table_reduces_at_e_one(p, m):
    assert table3(p, m, 1).rows == table2(p, m).rows


@pytest.mark.parametrize("p, m", [(3, 5), (3, 7), (5, 5), (7, 5), (3, 9), (5, 7)])
def test_value_table_moments(p, m):
    assert moment_sums(table1(p, m)) == expected_moments(p, m)


@pytest.mark.parametrize("p, m, e", [(3, 10, 2), (3, 15, 3), (5, 10, 2)])
def test_general_table_counts(p, m, e):
    table = table3(p, m, e)
    assert table.total() == p ** (3 * m)
    assert all(freq > 0 for _, freq in table.rows)
    assert table.support()[0] == 0
    assert min(w for w in table.support() if w) == minimum_distance(p, m, e)


def test_expected_moments_c351():
    m1, m2, m3, m4 = expected_moments(3, 5)
    assert m1 == 3 ** 15
    assert m2 == 3 ** 20
    assert m3 == 3 ** 15 * (243 * 3 + 243 - 3)
    assert m4 == 3 ** 20 * 969


@pytest.mark.parametrize("p, m", [(3, 5), (3, 7), (5, 5), (7, 5)])
def test_frequency_system_matches_value_table(p, m):
    rows = table1(p, m).rows
    assert solve_frequency_system(p, m) == tuple(freq for _, freq in rows[2:])


def test_frequency_system_c351():
    assert solve_frequency_system(3, 5) == (2548260, 2038608, 14520, 7260)


def test_minimum_distance():
    assert minimum_distance(3, 5) == 108
    assert minimum_distance(3, 7) == 1296
    assert minimum_distance(5, 5) == 2000


def test_weight_for_value():
    assert weight_for_value(243, 3, 5) == 0
    assert weight_for_value(-81, 3, 5) == 216
    with pytest.raises(InvalidParameterError, match="not divisible"):
        weight_for_value(2, 3, 5)
    with pytest.raises(InvalidParameterError, match="outside"):
        weight_for_value(3 ** 6, 3, 5)


def test_enumerator_string():
    assert enumerator_string(table2(3, 5)) == "1+14520z^108+2548260z^144+9740258z^162+2038608z^180+7260z^216"
    with pytest.raises(InvalidParameterError):
        enumerator_string(table1(3, 5))


def test_moments_need_value_table():
    with pytest.raises(InvalidParameterError):
        moment_sums(table2(3, 5))


@pytest.mark.parametrize("p, m, e", [(3, 4, 1), (3, 3, 1), (2, 5, 1), (3, 10, 3), (3, 8, 2)])
def test_tables_reject_out_of_regime(p, m, e):
    with pytest.raises(InvalidParameterError):
        table1(p, m, e)
