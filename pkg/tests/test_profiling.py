import numpy as np
import pytest
import scipy.special
import scipy.stats
from hypothesis import given, settings
from hypothesis import strategies as st

from clustergrid import (
    Dataset,
    meta_gate,
    profile_clusters,
    regularized_incomplete_beta,
    student_t_two_sided_p,
    welch_t_test,
)
from clustergrid.errors import ParameterError, StatTestUndefinedError
from clustergrid.profiling import FeatureStat, GateOutcome


class TestRegularizedIncompleteBeta:
    @pytest.mark.parametrize("x", [0.0, 0.3, 1.0])
    def test_uniform_case(self, x):
        assert regularized_incomplete_beta(1.0, 1.0, x) == pytest.approx(x, abs=1e-12)

    def test_symmetric_case(self):
        assert regularized_incomplete_beta(2.0, 2.0, 0.5) == pytest.approx(0.5, abs=1e-12)

    def test_closed_form_b3(self):
        assert regularized_incomplete_beta(1.0, 3.0, 0.5) == pytest.approx(
            1 - 0.5**3, abs=1e-10
        )

    @pytest.mark.parametrize(
        "a,b,x", [(0.0, 1.0, 0.5), (1.0, -2.0, 0.5), (1.0, 1.0, 1.5), (1.0, 1.0, -0.1)]
    )
    def test_domain_errors(self, a, b, x):
        with pytest.raises(ParameterError):
            regularized_incomplete_beta(a, b, x)

    def test_monotone_in_x(self):
        grid = np.linspace(0.0, 1.0, 41)
        values = [regularized_incomplete_beta(2.5, 0.5, x) for x in grid]
        assert all(b >= a - 1e-13 for a, b in zip(values, values[1:]))

    def test_against_scipy(self, rng):
        for _ in range(60):
            a = float(rng.uniform(0.1, 60.0))
            b = float(rng.uniform(0.1, 60.0))
            x = float(rng.uniform(0.0, 1.0))
            assert regularized_incomplete_beta(a, b, x) == pytest.approx(
                float(scipy.special.betainc(a, b, x)), abs=1e-10
            )


class TestStudentT:
    @pytest.mark.parametrize("t", [0.0, 0.5, 1.0, 2.0, 4.899])
    @pytest.mark.parametrize("df", [1, 4, 10, 100])
    def test_against_scipy_t_distribution(self, t, df):
        expected = 2.0 * float(scipy.stats.t.sf(abs(t), df))
        assert student_t_two_sided_p(t, df) == pytest.approx(expected, abs=1e-6)

    def test_zero_statistic(self):
        assert student_t_two_sided_p(0.0, 7.0) == 1.0


class TestWelch:
    def test_identical_stats_give_p_one(self):
        assert welch_t_test(2.0, 1.0, 10, 2.0, 1.0, 10) == 1.0

    def test_spec_case(self):
        # t = 4.899, Welch-Satterthwaite df = 4.
        p = welch_t_test(6.0, 1.0, 3, 2.0, 1.0, 3)
        assert p == pytest.approx(0.0080, abs=0.0005)
        expected = 2.0 * float(scipy.stats.t.sf(4.0 / np.sqrt(2.0 / 3.0), 4))
        assert p == pytest.approx(expected, abs=1e-9)

    def test_degenerate_zero_variance(self):
        assert welch_t_test(3.0, 0.0, 5, 3.0, 0.0, 5) == 1.0
        assert welch_t_test(3.0, 0.0, 5, 4.0, 0.0, 5) == 0.0

    @pytest.mark.parametrize("na,nb", [(1, 5), (5, 1), (0, 2)])
    def test_undefined_for_tiny_samples(self, na, nb):
        with pytest.raises(StatTestUndefinedError):
            welch_t_test(1.0, 1.0, na, 2.0, 1.0, nb)

    @settings(max_examples=60, deadline=None)
    @given(
        mean_a=st.floats(-50, 50),
        mean_b=st.floats(-50, 50),
        var_a=st.floats(0.01, 100),
        var_b=st.floats(0.01, 100),
        n_a=st.integers(2, 200),
        n_b=st.integers(2, 200),
    )
    def test_symmetric_in_samples(self, mean_a, mean_b, var_a, var_b, n_a, n_b):
        p_ab = welch_t_test(mean_a, var_a, n_a, mean_b, var_b, n_b)
        p_ba = welch_t_test(mean_b, var_b, n_b, mean_a, var_a, n_a)
        assert p_ab == pytest.approx(p_ba, abs=1e-12)
        assert 0.0 <= p_ab <= 1.0

    def test_against_scipy_from_samples(self, rng):
        for _ in range(25):
            a = rng.normal(size=int(rng.integers(3, 30)))
            b = rng.normal(loc=rng.uniform(-1, 1), size=int(rng.integers(3, 30)))
            mine = welch_t_test(
                a.mean(), a.var(ddof=1), len(a), b.mean(), b.var(ddof=1), len(b)
            )
            expected = float(scipy.stats.ttest_ind(a, b, equal_var=False).pvalue)
            assert mine == pytest.approx(expected, abs=1e-9)


def two_cluster_dataset():
    values = [[1.0, 5.0], [1.0, 5.0], [3.0, 5.0], [3.0, 5.0]]
    return Dataset(columns=("signal", "flat"), values=values)


class TestProfileClusters:
    def test_z_score_in_population_units(self):
        ds = two_cluster_dataset()
        labels = np.array([0, 0, 1, 1])
        stats, notes = profile_clusters(ds, labels, 2, alpha=0.05)
        by = {(s.cluster_id, s.feature): s for s in stats}
        top = by[(1, "signal")]
        assert top.cluster_mean == 3.0
        assert top.population_mean == 2.0
        assert top.z_score == pytest.approx(1.0, abs=1e-12)
        assert by[(0, "signal")].z_score == pytest.approx(-1.0, abs=1e-12)

    def test_constant_feature_is_never_significant(self):
        ds = two_cluster_dataset()
        stats, _ = profile_clusters(ds, np.array([0, 0, 1, 1]), 2, alpha=0.5)
        flat = [s for s in stats if s.feature == "flat"]
        assert all(s.z_score == 0.0 and s.p_value == 1.0 and not s.significant for s in flat)

    def test_welch_pipeline_on_separated_clusters(self):
        values = [[5.0], [6.0], [7.0], [1.0], [2.0], [3.0]]
        ds = Dataset(columns=("v",), values=values)
        stats, notes = profile_clusters(ds, np.array([0, 0, 0, 1, 1, 1]), 2, alpha=0.05)
        assert notes == []
        assert stats[0].p_value == pytest.approx(0.0080, abs=0.0005)
        assert stats[0].significant

    def test_tiny_cluster_gets_p_one_and_a_note(self):
        values = [[1.0], [2.0], [3.0], [9.0]]
        ds = Dataset(columns=("v",), values=values)
        stats, notes = profile_clusters(ds, np.array([0, 0, 0, 1]), 2, alpha=0.05)
        tiny = [s for s in stats if s.cluster_id == 1]
        assert all(s.p_value == 1.0 and not s.significant for s in tiny)
        assert any("cluster 1" in note for note in notes)
        assert tiny[0].z_score != 0.0  # z is still reported

    def test_empty_clusters_are_skipped(self):
        ds = two_cluster_dataset()
        stats, _ = profile_clusters(ds, np.array([0, 0, 0, 0]), 3, alpha=0.05)
        assert {s.cluster_id for s in stats} == {0}

    def test_row_order_matches_cluster_then_column(self):
        ds = two_cluster_dataset()
        stats, _ = profile_clusters(ds, np.array([0, 0, 1, 1]), 2, alpha=0.05)
        assert [(s.cluster_id, s.feature) for s in stats] == [
            (0, "signal"), (0, "flat"), (1, "signal"), (1, "flat"),
        ]

    def test_weighted_cluster_means_reconstruct_population_mean(self, rng):
        values = rng.normal(size=(40, 3))
        ds = Dataset(columns=("a", "b", "c"), values=values)
        labels = rng.integers(0, 3, size=40)
        stats, _ = profile_clusters(ds, labels, 3, alpha=0.05)
        sizes = np.bincount(labels, minlength=3)
        for j, name in enumerate(ds.columns):
            weighted = sum(
                sizes[s.cluster_id] * s.cluster_mean
                for s in stats
                if s.feature == name
            )
            assert weighted / 40 == pytest.approx(values[:, j].mean(), abs=1e-9)

    def test_affine_feature_transforms_leave_z_and_p_alone(self, rng):
        values = rng.normal(size=(30, 2))
        labels = rng.integers(0, 2, size=30)
        labels[:2] = [0, 1]
        base = profile_clusters(
            Dataset(columns=("a", "b"), values=values), labels, 2, alpha=0.05
        )[0]
        moved = profile_clusters(
            Dataset(columns=("a", "b"), values=values * 3.5 + 100.0),
            labels, 2, alpha=0.05,
        )[0]
        for s, t in zip(base, moved):
            assert t.z_score == pytest.approx(s.z_score, abs=1e-9)
            assert t.p_value == pytest.approx(s.p_value, abs=1e-9)

    def test_bonferroni_divides_alpha(self):
        values = [[5.0], [6.0], [7.0], [1.0], [2.0], [3.0]]
        ds = Dataset(columns=("v",), values=values)
        labels = np.array([0, 0, 0, 1, 1, 1])
        plain = profile_clusters(ds, labels, 2, alpha=0.01)[0]
        corrected = profile_clusters(ds, labels, 2, alpha=0.01, bonferroni=True)[0]
        # p ~ 0.008: significant at 0.01 but not at 0.01/2.
        assert plain[0].significant
        assert not corrected[0].significant

    def test_alpha_validation(self):
        ds = two_cluster_dataset()
        with pytest.raises(ParameterError):
            profile_clusters(ds, np.array([0, 0, 1, 1]), 2, alpha=1.0)


def _stat(significant: bool) -> FeatureStat:
    p = 0.001 if significant else 0.9
    return FeatureStat(
        cluster_id=0, feature="f", cluster_mean=1.0, population_mean=0.0,
        z_score=1.0, p_value=p, significant=significant,
    )


class TestMetaGate:
    def test_no_significant_features_rules_out(self):
        outcome = meta_gate([_stat(False)], [2, 2], 4, 0.05)
        assert outcome.status == "ruled_out"
        assert outcome.reasons == ("no_significant_features",)

    def test_all_criteria_satisfied_passes(self):
        outcome = meta_gate([_stat(True)], [250, 250], 500, 0.05)
        assert outcome.status == "pass"
        assert outcome.reasons == ()

    def test_small_cluster_rules_out(self):
        outcome = meta_gate([_stat(True)], [490, 10], 500, 0.05)
        assert outcome.reasons == ("cluster_below_min_fraction",)

    def test_empty_cluster_rules_out(self):
        outcome = meta_gate([_stat(True)], [500, 0], 500, 0.0)
        assert outcome.reasons == ("empty_cluster",)

    def test_metric_degeneracy_carried_through(self):
        outcome = meta_gate([_stat(True)], [250, 250], 500, 0.05, ["db: degenerate"])
        assert outcome.reasons == ("metric_degenerate",)

    def test_reasons_in_canonical_order(self):
        outcome = meta_gate([_stat(False)], [500, 0], 500, 0.05, ["x"])
        assert outcome.reasons == (
            "no_significant_features",
            "empty_cluster",
            "cluster_below_min_fraction",
            "metric_degenerate",
        )

    def test_min_fraction_validation(self):
        with pytest.raises(ParameterError):
            meta_gate([_stat(True)], [2, 2], 4, 0.5)

    def test_outcome_invariant(self):
        with pytest.raises(ValueError):
            GateOutcome(status="pass", reasons=("empty_cluster",))
