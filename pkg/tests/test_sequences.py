import math

import numpy as np
import pytest

from orlent.errors import NegativeIndex, OutOfDomain, RatioNotMonotone
from orlent.orlicz import power
from orlent.sequences import (ConstantHead, ExpLog, LogDecay, Polynomial, Table, check_monotone,
                              doubling_check, eval_alpha, majorant_sigma, verify_net_conditions)

FAMILIES = [Polynomial(1.0), Polynomial(0.0), ExpLog(1.0, 0.5), LogDecay(2.0),
            ConstantHead(1.0), ConstantHead(2.0, 3.0), Table((1.0, 0.5, 0.5, 0.1), 0.05)]


def test_eval_examples():
    assert eval_alpha(Polynomial(1.0), 3.0) == pytest.approx(0.125)
    assert LogDecay(1.0).at_index(1) == pytest.approx(1.0)
    assert ExpLog(1.0, 0.5).at_index(1) == pytest.approx(math.exp(-1.0))
    assert Table((1.0, 0.5, 0.25)).at_index([1, 2, 3, 4]).tolist() == [1.0, 0.5, 0.25, 0.0]


def test_huge_index_no_overflow():
    for seq in FAMILIES:
        v = seq.at(5000.0)
        assert math.isfinite(v) and v >= 0
    assert Polynomial(2.0).log2_at(5000.0) == -10000.0


def test_negative_index():
    with pytest.raises(NegativeIndex):
        Polynomial(1.0).at(-1.0)
    with pytest.raises(NegativeIndex):
        Polynomial(1.0).at_index(0)


@pytest.mark.parametrize("seq", FAMILIES, ids=repr)
def test_families_are_monotone(seq):
    ok, witness = check_monotone(seq)
    assert ok, witness


def test_doubling_examples():
    for theta in (0.5, 1.0, 2.0):
        rep = doubling_check(Polynomial(theta), 2.0**theta)
        assert rep.ok
        assert rep.worst_ratio == pytest.approx(2.0**theta, rel=1e-12)
    s = ExpLog(1.3, 0.4)
    assert doubling_check(s, 2.0 ** (1.3 * 0.4 * math.log2(math.e))).ok
    bad = doubling_check(LogDecay(1.0), 1.5)
    assert not bad.ok
    assert bad.witness_log2_index == pytest.approx(0.0, abs=0.05)
    assert bad.worst_ratio == pytest.approx(math.log2(3), rel=1e-6)


def test_doubling_bad_constant():
    with pytest.raises(OutOfDomain):
        doubling_check(Polynomial(1.0), 0.5)


def test_majorant_examples():
    M1, M2 = power(1), power(2)
    assert majorant_sigma(1, M1, M2).at(10.0) == pytest.approx(2.0**-7)
    sig = majorant_sigma(4, M1, M2)
    assert sig.at(2.0) == pytest.approx(2.0**-7 * 2)
    assert sig.at(4.0) == pytest.approx(sig.at(3.0))  # j = 16 frozen at j = 8
    assert check_monotone(sig)[0]
    with pytest.raises(RatioNotMonotone):
        majorant_sigma(4, M2, M1)


def test_majorant_dominance():
    # alpha_j <= 2^(7/p) * Lambda(k) * sigma_j / sigma_1-scale, checked through the bracket
    from orlent.bounds import lambda_bound
    M1, M2 = power(1), power(2)
    for seq in (Polynomial(1.0), LogDecay(1.5), ExpLog(1.0, 0.5)):
        for k in (4, 9, 16):
            lam = lambda_bound(seq, M1, M2, k)
            sig = majorant_sigma(k, M1, M2)
            u = np.linspace(math.log2(k), k - 1, 200)
            lhs = np.asarray(seq.at(u))
            rhs = 2.0**7 * 2.0**2 * lam * np.asarray(sig.at(u))
            assert np.all(lhs <= rhs * (1 + 1e-9))


def test_net_conditions_spec_examples():
    M1, M2 = power(1), power(2)
    for m in (5, 6):
        for k in (2 ** (m + 4), 2 ** (m + 5) - 1):
            assert verify_net_conditions(majorant_sigma(k, M1, M2), m, M1, M2).ok
    assert not verify_net_conditions(ConstantHead(1.0), 5, power(2), power(1)).ok
    assert verify_net_conditions(ConstantHead(0.0), 5, M1, M2).ok
    with pytest.raises(OutOfDomain):
        verify_net_conditions(ConstantHead(0.0), 4, M1, M2)


def test_net_conditions_fail_for_steep_target():
    # the index 2^(m + 2^(i-1)) is too early for the majorant once phi_M2 is very flat
    M1, M2 = power(1), power(64)
    rep = verify_net_conditions(majorant_sigma(1000, M1, M2), 5, M1, M2)
    assert not rep.ok
    assert [label for label, *_, ok in rep.checks if not ok][0] == "i=3"
