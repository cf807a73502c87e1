import numpy as np
import pytest

from topocause.data import PairSample
from topocause.errors import BootstrapFailure, DegenerateInput, InsufficientData, InvalidInput
from topocause.rng import generator, mix64, standard_normal
from topocause.scoring import ScoreConfig, Verdict
from topocause.trac import (
    TracConfig,
    empirical_inverse_cdf,
    fit_gaussian_copula_rho,
    sample_null,
    trac_pvalue,
)


def test_rho_monotone_relation_clips_to_one():
    x = standard_normal(generator(0), 100)
    assert fit_gaussian_copula_rho(PairSample(x, np.exp(x))) == 0.999
    assert fit_gaussian_copula_rho(PairSample(x, -x)) == -0.999


def test_rho_independent_near_zero():
    hits = 0
    for seed in range(20):
        rng = generator(mix64(77, seed))
        s = PairSample(standard_normal(rng, 5000), standard_normal(rng, 5000))
        if abs(fit_gaussian_copula_rho(s)) < 0.05:
            hits += 1
    assert hits >= 19


def test_rho_invariant_under_monotone_marginals():
    rng = generator(33)
    x = standard_normal(rng, 400)
    y = 0.7 * x + standard_normal(rng, 400)
    base = fit_gaussian_copula_rho(PairSample(x, y))
    warped = fit_gaussian_copula_rho(PairSample(np.exp(x), y**3))
    assert warped == base


def test_rho_errors():
    with pytest.raises(InsufficientData):
        fit_gaussian_copula_rho(PairSample([1.0, 2.0], [3.0, 4.0]))
    with pytest.raises(DegenerateInput):
        fit_gaussian_copula_rho(PairSample([1.0, 1.0, 1.0], [1.0, 2.0, 3.0]), ties="average")


def test_empirical_inverse_cdf():
    s = np.array([10.0, 20.0, 30.0])
    assert empirical_inverse_cdf(s, 0.5) == 20.0
    assert empirical_inverse_cdf(s, 1e-9) == 10.0
    assert empirical_inverse_cdf(s, 1 - 1e-12) == 30.0
    assert empirical_inverse_cdf(np.array([7.0]), 0.3) == 7.0
    out = empirical_inverse_cdf(s, np.array([0.2, 0.9]))
    assert np.array_equal(out, [10.0, 30.0])
    with pytest.raises(InvalidInput):
        empirical_inverse_cdf(np.array([]), 0.5)


def test_sample_null_near_comonotone_rank_agreement():
    # rank agreement over index pairs (concordance): at rho=0.999 the
    # Gaussian-copula Kendall tau is (2/pi)*asin(rho) ~ 0.9716, i.e. a
    # concordant fraction of ~0.986
    from scipy.stats import kendalltau

    rng = generator(21)
    marg = np.sort(standard_normal(rng, 1000))
    null = sample_null(0.999, marg, marg, 1000, seed=5)
    tau = kendalltau(null.x, null.y).statistic
    assert (1 + tau) / 2 >= 0.95


def test_sample_null_marginal_submultiset_and_determinism():
    rng = generator(22)
    x = np.sort(standard_normal(rng, 200))
    y = np.sort(standard_normal(rng, 200))
    a = sample_null(0.5, x, y, 200, seed=9)
    b = sample_null(0.5, x, y, 200, seed=9)
    assert np.array_equal(a.x, b.x) and np.array_equal(a.y, b.y)
    assert set(a.x).issubset(set(x))
    assert set(a.y).issubset(set(y))


def random_sample(seed, n=60):
    rng = generator(seed)
    return PairSample(standard_normal(rng, n), standard_normal(rng, n))


def test_pvalue_arithmetic_zero_exceedances():
    s = random_sample(1)
    cfg = TracConfig(bootstraps=4, alpha=0.25, seed=123)
    nulls = iter([0.1, 0.2, 0.3, 0.4])

    def scorer(sample, seed):
        return 0.5 if seed == 123 else next(nulls)

    res = trac_pvalue(s, cfg, scorer=scorer)
    assert res.p_value == pytest.approx(0.2, abs=1e-15)
    assert res.verdict.verdict == Verdict.X_TO_Y


def test_pvalue_arithmetic_all_exceed():
    s = random_sample(2)
    cfg = TracConfig(bootstraps=4, alpha=0.10, seed=7)

    def scorer(sample, seed):
        return 0.5 if seed == 7 else 0.9

    res = trac_pvalue(s, cfg, scorer=scorer)
    assert res.p_value == 1.0
    assert res.verdict.verdict == Verdict.ABSTAIN


def test_pvalue_zero_score_abstains():
    s = random_sample(3)
    cfg = TracConfig(bootstraps=4, alpha=0.99, seed=11)

    def scorer(sample, seed):
        return 0.0

    res = trac_pvalue(s, cfg, scorer=scorer)
    assert res.p_value == 1.0
    assert res.verdict.verdict == Verdict.ABSTAIN


def test_pvalue_negative_score_directs_y_to_x():
    s = random_sample(4)
    cfg = TracConfig(bootstraps=4, alpha=0.5, seed=13)

    def scorer(sample, seed):
        return -0.9 if seed == 13 else 0.0

    res = trac_pvalue(s, cfg, scorer=scorer)
    assert res.p_value == pytest.approx(0.2, abs=1e-15)
    assert res.verdict.verdict == Verdict.Y_TO_X


def test_pvalue_support():
    s = random_sample(5)
    for seed in range(5):
        cfg = TracConfig(bootstraps=7, alpha=0.10, seed=seed)
        res = trac_pvalue(s, cfg, scorer=lambda sample, sd: float(sample.x.mean()))
        k = round(res.p_value * 8)
        assert res.p_value == pytest.approx(k / 8, abs=1e-15)
        assert 1 <= k <= 8


def test_bootstrap_failure_reports_replicate():
    s = random_sample(6)
    cfg = TracConfig(bootstraps=3, seed=17)

    def scorer(sample, seed):
        if seed != 17:
            raise RuntimeError("bad")
        return 0.5

    with pytest.raises(BootstrapFailure) as err:
        trac_pvalue(s, cfg, scorer=scorer)
    assert err.value.replicate == 1


def test_trac_deterministic_and_thread_invariant():
    s = random_sample(7, n=60)
    cfg = TracConfig(bootstraps=6, seed=3)
    score_cfg = ScoreConfig()
    a = trac_pvalue(s, cfg, score_cfg)
    b = trac_pvalue(s, cfg, score_cfg)
    c = trac_pvalue(s, cfg, score_cfg, threads=2)
    assert a == b == c


def test_trac_config_validation():
    with pytest.raises(InvalidInput):
        TracConfig(bootstraps=0)
    with pytest.raises(InvalidInput):
        TracConfig(alpha=1.0)
    with pytest.raises(InvalidInput):
        TracConfig(score_variant="nope")
    with pytest.raises(InvalidInput):
        TracConfig(rho_clip=1.0)
