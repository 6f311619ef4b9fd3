from fractions import Fraction

import pytest

from hyperlat import binquad
from hyperlat.binquad import (GenusClassCounts, GenusLabel, class_number, class_number_4D,
                              class_number_forms, genus_counts, is_fundamental, is_realizable, tau)
from oracles import genus_census, is_fundamental as oracle_fundamental, reduced_forms_table


@pytest.fixture(scope="module")
def forms_5000():
    return reduced_forms_table(5000)


@pytest.mark.parametrize("D,expected", [(-3, True), (-9, False), (-8, True), (-4, True),
                                        (-12, True), (-16, False), (-84, True), (-20, True)])
def test_is_fundamental(D, expected):
    assert is_fundamental(D) is expected


def test_is_fundamental_matches_oracle():
    for D in range(-1, -3000, -1):
        assert is_fundamental(D) == oracle_fundamental(D)


@pytest.mark.parametrize("D,h", [(-3, 1), (-4, 1), (-23, 3), (-12, 1), (-420, 8), (-3315, 8)])
def test_class_number_examples(D, h):
    assert class_number(D) == h
    assert class_number_forms(D) == h


def test_class_number_rejects_non_fundamental():
    with pytest.raises(ValueError):
        class_number(-9)


def test_class_number_matches_form_oracle(forms_5000):
    for D in range(-3, -5001, -1):
        if is_fundamental(D):
            assert class_number(D) == len(forms_5000[D]), D


@pytest.mark.parametrize("D,h", [(-3, 1), (-7, 1), (-11, 3), (-15, 2), (-19, 3)])
def test_class_number_4D(D, h, forms_5000):
    assert class_number_4D(D) == h
    if D != -3:
        assert h == len(forms_5000[4 * D])


def test_class_number_4D_rejects():
    with pytest.raises(ValueError):
        class_number_4D(-8)


@pytest.mark.parametrize("D,t", [(-3, 0), (-84, 2), (-8, 0), (-4, 0), (-420, 3), (-20, 1)])
def test_tau(D, t):
    assert tau(D) == t


@pytest.mark.parametrize("D,mu,expected", [(-4, 0, (1, 1, 0)), (-8, 0, (1, 0, 0)), (-23, 0, (0, 1, 1))])
def test_genus_count_examples(D, mu, expected):
    assert genus_counts(GenusLabel(D, mu)).as_tuple() == expected


def test_genus_counts_rejects():
    with pytest.raises(ValueError):
        genus_counts(GenusLabel(-9, 0))
    with pytest.raises(ValueError):
        genus_counts(GenusLabel(-15, 4))


def _oracle_counts(D, cell):
    b0, other, nonamb = cell
    amb = b0 + other
    if D % 4 == 1:
        return (0, amb, nonamb // 2)
    if D % 16 == 12:
        return (b0, other, nonamb // 2)
    return (amb, 0, nonamb // 2)


def test_genus_counts_match_form_census(forms_5000):
    unrealizable = 0
    for D in range(-3, -5001, -1):
        if not is_fundamental(D) or D == -4:
            continue
        census = genus_census(D, forms_5000[D])
        k = len([p for p, _ in binquad.factorize(-D) if p != 2])
        total = 0
        for mu in range(1 << k):
            got = genus_counts(GenusLabel(D, mu))
            assert is_realizable(D, mu) == (mu in census), (D, mu)
            if mu in census:
                assert got.as_tuple() == _oracle_counts(D, census[mu]), (D, mu)
                assert got.hrI + got.hrII + 2 * got.hnr == class_number(D) // 2 ** tau(D)
                total += got.hrI + got.hrII
            else:
                unrealizable += 1
                assert got.hrI == got.hrII == 0
                assert got.hnr == Fraction(class_number(D), 2 ** (tau(D) + 1))
        assert total == 2 ** tau(D), D
    assert unrealizable > 0


def test_strict_mode_rejects_unrealizable():
    D = -15
    bad = next(mu for mu in range(4) if not is_realizable(D, mu))
    with pytest.raises(ValueError):
        genus_counts(GenusLabel(D, bad), strict=True)
    good = next(mu for mu in range(4) if is_realizable(D, mu))
    assert isinstance(genus_counts(GenusLabel(D, good), strict=True), GenusClassCounts)


def test_cache_file_roundtrip(tmp_path):
    cache = binquad.ClassNumberCache()
    path = tmp_path / "h.txt"
    path.write_text("-23 3\n")
    cache.load(str(path))
    assert cache.values == {-23: 3}
    cache.update({-47: 5, -23: 3})
    assert cache.save() == 1
    assert path.read_text() == "-23 3\n-47 5\n"
    assert cache.save() == 0
