from itertools import combinations, product
import math

import numpy as np
import pytest

from orlent.combinatorics import (CodeFamily, build_code_family, check_binomial_bound,
                                  check_calculus_bound, check_sqrt_inequality, check_stirling,
                                  code_parameters, count_family_F, count_family_F_dp,
                                  inequality_checks, log2_f_bound, omega_card_breakdown,
                                  omega_log_card_bound, omega_membership, omega_quantize,
                                  omega_weights, psi, split_decompose, sqrt_inequality_margin,
                                  verify_code_family, w_membership)
from orlent.errors import (BlockSizeViolated, ConstructionExhausted, Intractable, LengthMismatch,
                           NormExceedsOne, NotInW, PreconditionViolated, SizeBoundViolated)
from orlent.orlicz import luxemburg_norm, power
from orlent.verify import sample_split_input, sample_w


def test_code_parameters():
    assert code_parameters(256, 40) == (11, 1024)
    with pytest.raises(PreconditionViolated):
        code_parameters(256, 60)
    with pytest.raises(PreconditionViolated):
        code_parameters(168, 34)
    s, _ = code_parameters(1000, 80)
    x = 80 / math.log2(2000 / 80)
    assert x < s <= x + 1


def test_code_family_n256_k40():
    fam = build_code_family(256, 40)
    assert fam.s == 11 and len(fam.members) >= 1024
    assert all(len(m) == 11 and list(m) == sorted(m) for m in fam.members)
    ver = verify_code_family(fam)
    assert ver.ok and ver.pairs_checked == 1024 * 1023 // 2
    # independent check through numpy incidence products
    inc = np.zeros((len(fam.members), 256), dtype=np.int32)
    for r, m in enumerate(fam.members):
        inc[r, np.array(m) - 1] = 1
    inter = inc @ inc.T
    np.fill_diagonal(inter, 0)
    assert 2 * 11 - 2 * inter.max() >= 11
    assert ver.worst_distance == 22 - 2 * inter.max()


def test_code_family_deterministic():
    a = build_code_family(256, 40).members
    assert a == build_code_family(256, 40).members
    assert a != build_code_family(256, 40, seed=1).members


def test_code_verifier_catches_bad_pairs():
    bad = CodeFamily(10, 3, 0, [(1, 2, 3), (1, 2, 4)])
    ver = verify_code_family(bad)
    assert not ver.ok and ver.worst_distance == 2 and ver.worst_pair == (0, 1)
    assert not verify_code_family(CodeFamily(10, 3, 0, [(1, 2)])).ok


def test_code_family_exhaustion():
    with pytest.raises(ConstructionExhausted) as exc:
        build_code_family(256, 40, retries=0, max_candidates=50)
    assert exc.value.context["best_size"] <= 50


def test_w_membership_examples():
    x = np.full(32, 2 ** (2 / 25))
    assert w_membership(x, 5)
    x[0] = 1.1
    assert not w_membership(x, 5)
    assert w_membership(np.zeros(64), 6)
    with pytest.raises(LengthMismatch):
        w_membership(np.zeros(31), 5)


def test_quantize_examples():
    rng = np.random.default_rng(0)
    x = rng.uniform(-1, 1, 32) * 2 ** (2 / 25)
    assert not omega_quantize(x, 5).any()
    x = np.zeros(2**13)
    x[0] = 8.0
    z = omega_quantize(x, 13)
    assert z[0] == 8 and not z[1:].any()
    assert psi(13, 0) == pytest.approx(2**9 / 169)
    z = np.zeros(2**13, dtype=int)
    z[3] = -8
    assert np.array_equal(omega_quantize(z.astype(float), 13), z)
    with pytest.raises(NotInW):
        omega_quantize(np.full(32, 2.0), 5)


def test_quantize_rank_ties_lowest_index():
    # only rank 1 may be nonzero at m = 13; the tie goes to the lower index
    x = np.zeros(2**13)
    x[[9, 4]] = 3.0
    z = omega_quantize(x, 13)
    assert np.flatnonzero(z).tolist() == [4] and z[4] == 4


@pytest.mark.parametrize("m,sparse", [(5, None), (6, None), (8, None), (13, 64)])
def test_quantize_random(m, sparse):
    rng = np.random.default_rng(m)
    for _ in range(200):
        x = sample_w(rng, m, sparse)
        assert w_membership(x, m)
        z = omega_quantize(x, m)
        assert np.max(np.abs(x - z)) <= 4
        assert omega_membership(z, m)


def test_membership_rejects():
    z = np.zeros(64, dtype=int)
    z[0] = 2
    assert not omega_membership(z, 6)
    z = np.zeros(2**13, dtype=int)
    z[:257] = 4
    assert not omega_membership(z, 13)  # too many nonzeros
    z = np.zeros(2**13, dtype=int)
    z[:2] = 8  # rank 2 cap is 2^psi(13,1) < 8
    assert 2 ** psi(13, 1) < 8
    assert not omega_membership(z, 13)
    assert not omega_membership(np.zeros(10), 5)


def test_card_bound_examples():
    b5 = omega_card_breakdown(5)
    assert b5.q_log2 == pytest.approx(2 / 25) and b5.q_log2 <= 1 / 4
    assert omega_card_breakdown(6).q_log2 <= 2 ** (6 - 7)
    assert omega_log_card_bound(10) <= 2**9 - 1
    for m in range(5, 21):
        b = omega_card_breakdown(m)
        assert b.q_log2 <= b.q_chain_log2 + 1e-12 <= 2 ** (m - 7) + 1e-12
        assert b.gamma_log2 <= b.gamma_stirling_log2
        assert omega_log_card_bound(m) <= 2 ** (m - 1) - 1


def test_gamma_exact_for_small_m():
    for m in (5, 6, 7):
        exact = math.comb(2**m, 2 ** (m - 5))
        for j in range(m - 5):
            exact *= math.comb(2 ** (j + 1), 2**j)
        assert omega_card_breakdown(m).gamma_log2 == pytest.approx(math.log2(exact), rel=1e-12)


def brute_force_families(m, sizes):
    """Enumerate actual tuples of subsets (F_0..F_m) on disjoint ground sets."""
    per_set = [[c for r in range(s + 1) for c in combinations(range(s), r)] for s in sizes]
    return sum(1 for choice in product(*per_set)
               if sum(len(F) * 2**i for i, F in enumerate(choice)) <= 2**m)


def test_count_family_examples():
    assert count_family_F(1, (2, 2)) == (6, True)
    assert count_family_F(0, (1,)) == (2, True)
    for m, sizes in ((0, (1,)), (1, (2, 2)), (1, (3, 1)), (1, (3, 3)), (0, (0,))):
        assert count_family_F(m, sizes)[0] == brute_force_families(m, sizes)


def test_count_family_maximal_sizes():
    for m in range(4):
        sizes = [2 ** (m + 2**i) for i in range(m + 1)]
        count, ok = count_family_F(m, sizes)
        assert ok and math.log2(count) <= 2 ** (m + 3)
        assert count == count_family_F_dp(m, sizes)
    assert count_family_F(3, (16, 32, 128, 2048))[0] == count_family_F_dp(3, (16, 32, 128, 2048))


def test_count_family_errors():
    with pytest.raises(SizeBoundViolated):
        count_family_F(1, (2,))
    with pytest.raises(SizeBoundViolated):
        count_family_F(1, (5, 2))
    with pytest.raises(Intractable):
        count_family_F(8, [2 ** (8 + 2**i) for i in range(9)])


def test_split_examples():
    M1, M2 = power(1), power(2)
    blocks = [np.zeros(2) for _ in range(7)]
    res = split_decompose(blocks, 5, M1, M2)
    assert all(len(F) == 0 for F in res.F) and res.weighted_count == 0 and res.tz_norm == 0
    blocks[0][1] = 1.0
    res = split_decompose(blocks, 5, M1, M2)
    assert res.F[0].tolist() == [1]
    assert np.array_equal(res.y[0], blocks[0]) and not np.concatenate(res.z).any()


def test_split_random_guarantees():
    rng = np.random.default_rng(7)
    for _ in range(100):
        blocks, M1, M2 = sample_split_input(rng)
        res = split_decompose(blocks, 5, M1, M2)
        assert res.weighted_count <= 1
        z = np.concatenate(res.z)
        w = omega_weights(5, M1, M2)
        direct = luxemburg_norm(M2, np.concatenate([w[i] * zi for i, zi in enumerate(res.z)]))
        assert direct <= 1 + 1e-9 and res.ok
        for i, (b, yb, zb) in enumerate(zip(blocks, res.y, res.z)):
            assert np.array_equal(yb + zb, b)
        assert len(res.F[6]) == 0


def test_split_errors():
    M1 = power(1)
    with pytest.raises(NormExceedsOne):
        split_decompose([np.array([0.8, 0.8])] + [np.zeros(1)] * 6, 5, M1)
    with pytest.raises(BlockSizeViolated):
        split_decompose([np.zeros(1)] * 6, 5, M1)
    with pytest.raises(BlockSizeViolated):
        split_decompose([np.zeros(2**6 + 1)] + [np.zeros(1)] * 6, 5, M1)


def test_omega_weights():
    w = omega_weights(5, power(1), power(2))
    assert w[-1] == 1.0
    assert w[0] == pytest.approx(2**2.5)
    assert w[5] == pytest.approx(1.0)


def test_inequality_examples():
    assert sqrt_inequality_margin(5.0) > 0
    stirling_1 = math.sqrt(2 * math.pi) / math.e
    assert stirling_1 <= 1 <= stirling_1 * math.exp(1 / 12)
    assert check_sqrt_inequality().ok
    assert check_stirling().ok
    assert check_binomial_bound().ok
    calc = check_calculus_bound()
    assert calc.ok
    # dense grid oracle for beta = 1 in linear space
    t = np.linspace(32, 2e5, 200001)
    f = t * 2.0 ** (-t / (16 * np.log2(t) ** 2))
    assert f.max() <= 2.0 ** log2_f_bound(1.0)
    assert inequality_checks().ok
