import math
from decimal import Decimal
from fractions import Fraction

import pytest

import c3rotor


def test_block_layout():
    b = c3rotor.build_block("A+", lambda_=1.0, truncation=3)
    assert b["diag"] == [0, 9, 36, 81]
    assert b["offprod"][1:] == [0.5, 0.25, 0.25]


def test_quasi_degenerate_levels():
    e = c3rotor.solve_spectrum("rawA", 0.1, 5)
    assert abs(e[1] - 8.99990740760586) < 1e-12
    assert abs(e[2] - 9.00046293268167) < 1e-12
    hp = c3rotor.solve_spectrum("rawA", "0.1", 5, digits=30)
    assert isinstance(hp[3], Decimal)
    assert abs(hp[4] - hp[3] - Decimal("4.76297776547e-10")) < Decimal("1e-20")


def test_oracle_and_sturm_count():
    s = c3rotor.solve_spectrum("EA", 3.7, 4, truncation=30)
    d = c3rotor.dense_oracle("EA", 3.7, 30, 4)
    assert max(abs(a - b) for a, b in zip(s, d)) < 1e-12
    assert c3rotor.count_below("rawA", 0.1, 10, 9.0001) == 2


def test_series_exact():
    assert c3rotor.rs_series("A+", 0, 6) == [0, Fraction(-1, 18), Fraction(7, 23328), Fraction(-29, 8503056)]
    assert c3rotor.rs_series("EA", 4, 2) == [49, Fraction(1, 374)]


def test_splitting():
    assert abs(c3rotor.tunneling_splitting(1, 0.1) - 5.5552507581e-4) < 1e-12
    assert c3rotor.tunneling_splitting(3, "0.1", digits=30) > 0


def test_asymptotic():
    assert c3rotor.asymptotic_energy(0, 50.0) == pytest.approx(-35.0)


def test_exceptional_point_and_continuation():
    (ep,) = c3rotor.exceptional_points("EA", 0, 5)
    assert abs(ep["g"] / Decimal("2.9356105095073260590") - 1) < Decimal("1e-19")
    assert abs(ep["energy"] / Decimal("2.6226454301444952679") - 1) < Decimal("1e-19")
    g = 1.04 * float(ep["g"])
    z = c3rotor.continuation("EA", ep, g)
    assert z.imag > 0
    dense = c3rotor.dense_complex_spectrum("EA", g, ep["truncation"])
    assert min(abs(w - z) for w in dense) < 1e-8


def test_real_phase():
    assert len(c3rotor.real_spectrum_st("EA", 2.9, 2)) == 2
    assert len(c3rotor.real_spectrum_st("EA", 3.0, 2)) == 0


def test_errors():
    with pytest.raises(ValueError):
        c3rotor.build_block("A+", lambda_=1.0, truncation=1)
    with pytest.raises(ValueError):
        c3rotor.rs_series("rawA", 0, 2)
    with pytest.raises(ArithmeticError):
        c3rotor.solve_spectrum("A+", 1.0, 2, tol=1e-20)
    assert not math.isnan(c3rotor.characteristic("A+", lambda_=1.0, truncation=6, energy=0.1)[0])
