import json

import numpy as np
import pytest

from conclab.channels import flip_channel, identity_channel, sample_channel
from conclab.concurrence import parse_cut
from conclab.errors import DimensionMismatchError
from conclab.factorization import (
    CampaignConfig,
    classify_scenario,
    default_cut,
    evaluate_identity,
    identity_for,
    relabel_scenario,
    run_campaign,
)
from conclab.states import bell, ghz, parse_state, w

SQ2 = 1 / np.sqrt(2)


def sampled(families, seed):
    rng = np.random.default_rng(seed)
    return tuple(sample_channel(f, rng) for f in families)


class TestIdentityStructure:
    def test_default_cuts(self):
        assert default_cut(2) == parse_cut("1|2")
        assert default_cut(3) == parse_cut("12|3")
        assert default_cut(4) == parse_cut("123|4")

    def test_product_terms(self):
        assert identity_for("product", 2).rhs_terms == ((1, 2),)
        assert identity_for("product", 3).rhs_terms == ((1, 2, 3),)
        assert identity_for("product", 4, "12|34").rhs_terms == ((1, 2, 3, 4),)

    def test_sum_terms_pair_blocks(self):
        assert identity_for("sum", 3).rhs_terms == ((1, 3), (2, 3))
        assert identity_for("sum", 4).rhs_terms == ((1, 4), (2, 4), (3, 4))
        assert identity_for("sum", 4, "12|34").rhs_terms == ((1, 3), (1, 4), (2, 3), (2, 4))

    def test_rank_ceilings(self):
        assert identity_for("product", 3).rank_ceiling == 2
        assert identity_for("sum", 3).rank_ceiling == 4

    def test_degree_matching_exponents(self):
        assert identity_for("product", 2).normalization_exponent == 1
        assert identity_for("product", 3).normalization_exponent == 2
        assert identity_for("product", 4).normalization_exponent == 3
        assert identity_for("sum", 3).normalization_exponent == 1
        assert identity_for("sum", 4, "12|34").normalization_exponent == 1

    def test_sum_needs_three_qubits(self):
        with pytest.raises(ValueError):
            identity_for("sum", 2)

    def test_unknown_form(self):
        with pytest.raises(ValueError):
            identity_for("ratio", 3)


class TestEvaluate:
    def test_bell_bit_flip_closed_form(self):
        # both factors |1-2p| = 0.6, so both sides are 0.36
        chans = [flip_channel("BF", 0.2), flip_channel("BF", 0.2)]
        rep = evaluate_identity(identity_for("product", 2), bell(SQ2), chans)
        assert abs(rep.lhs - 0.36) < 1e-12
        assert abs(rep.rhs - 0.36) < 1e-12
        assert rep.residual <= 1e-10
        assert rep.final_rank == 2
        assert rep.applicable

    def test_identity_channels_zero_residual(self):
        chans = [identity_channel(), identity_channel()]
        for alpha in (SQ2, 0.6):
            rep = evaluate_identity(identity_for("product", 2), bell(alpha), chans)
            assert rep.lhs == pytest.approx(rep.initial_concurrence, abs=1e-14)
            assert rep.residual <= 1e-12

    def test_ghz3_phase_flip_product(self):
        for seed in range(10):
            rep = evaluate_identity(identity_for("product", 3), ghz(3),
                                    sampled(["PF"] * 3, 300 + seed))
            assert rep.residual <= 1e-10
            assert rep.final_rank == 2

    @pytest.mark.parametrize("state,families,form", [
        ("ghz3", ["PF"] * 3, "product"),
        ("ghz3", ["BF"] * 3, "sum"),
        ("ghz3", ["PF", "PF", "BF"], "sum"),
        ("ghz3", ["PF", "PF", "BPF"], "sum"),
        ("w3", ["PF"] * 3, "sum"),
        ("ghz4", ["PF"] * 4, "product"),
        ("ghz4", ["PF", "PF", "PF", "BF"], "sum"),
        ("w4", ["PF"] * 4, "sum"),
    ])
    def test_rank_monotonicity_of_factors(self, state, families, form):
        psi = parse_state(state)
        for seed in range(5):
            rep = evaluate_identity(identity_for(form, psi.n_qubits), psi,
                                    sampled(families, 400 + seed))
            for f in rep.factors:
                assert f.rank <= rep.final_rank

    def test_exponent_irrelevant_for_maximal_states(self):
        chans = sampled(["PF"] * 4, 77)
        base = evaluate_identity(identity_for("product", 4), ghz(4), chans)
        for e in (0, 3, 5):
            rep = evaluate_identity(identity_for("product", 4), ghz(4), chans,
                                    normalization_exponent=e)
            assert abs(rep.residual - base.residual) <= 1e-12

    def test_anchor_conventions_agree_on_symmetric_state(self):
        chans = sampled(["PF", "PF", "BF"], 55)
        last = evaluate_identity(identity_for("sum", 3), ghz(3), chans, anchor="last")
        own = evaluate_identity(identity_for("sum", 3), ghz(3), chans, anchor="own")
        assert abs(last.rhs - own.rhs) <= 1e-10

    def test_arity_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            evaluate_identity(identity_for("product", 3), ghz(3),
                              [identity_channel()] * 2)
        with pytest.raises(DimensionMismatchError):
            evaluate_identity(identity_for("product", 2), ghz(3),
                              [identity_channel()] * 2)

    def test_report_records_parameters(self):
        chans = sampled(["BF", "BF"], 9)
        rep = evaluate_identity(identity_for("product", 2), bell(SQ2), chans, seed=9)
        assert rep.seed == 9
        assert len(rep.channels) == 2
        assert rep.channels[0].family == "BF"
        assert rep.aggregation == "sum" and rep.anchor == "last"


class TestQuadratureRelations:
    """The same-family rank 3-4 scenarios satisfy the quadrature (rms)
    aggregation of the sum identity exactly; the plain sum does not."""

    def test_ghz3_three_bit_flips_rms(self):
        for seed in range(20):
            rep = evaluate_identity(identity_for("sum", 3), ghz(3),
                                    sampled(["BF"] * 3, 500 + seed), aggregation="rms")
            assert rep.final_rank <= 4
            assert rep.residual <= 1e-10

    def test_w3_three_phase_flips_rms(self):
        for seed in range(20):
            rep = evaluate_identity(identity_for("sum", 3), w(3),
                                    sampled(["PF"] * 3, 600 + seed), aggregation="rms")
            assert rep.final_rank == 3
            assert rep.residual <= 1e-10

    def test_w4_four_phase_flips_rms_tail_cut(self):
        for seed in range(5):
            rep = evaluate_identity(identity_for("sum", 4), w(4),
                                    sampled(["PF"] * 4, 700 + seed), aggregation="rms")
            assert rep.final_rank == 4
            assert rep.residual <= 1e-10

    def test_plain_sum_overshoots_on_same_scenarios(self):
        rep = evaluate_identity(identity_for("sum", 3), ghz(3),
                                sampled(["BF"] * 3, 501), aggregation="sum")
        assert rep.rhs > rep.lhs + 0.01

    def test_mixed_family_closed_form(self):
        # PF,PF,BF on ghz3: the evolved state is diagonal in the flip-parity
        # basis and the cut concurrence is max(0, (1-p3)(1 + x1 x2) - 1);
        # neither aggregation of single-sided products reproduces it.
        ps = (0.1, 0.2, 0.3)
        chans = [flip_channel("PF", ps[0]), flip_channel("PF", ps[1]), flip_channel("BF", ps[2])]
        rep = evaluate_identity(identity_for("sum", 3), ghz(3), chans)
        x1, x2 = 1 - 2 * ps[0], 1 - 2 * ps[1]
        expected_lhs = max(0.0, (1 - ps[2]) * (1 + x1 * x2) - 1)
        assert abs(rep.lhs - expected_lhs) <= 1e-12
        assert rep.final_rank == 4
        assert rep.residual > 0.1


class TestClassify:
    def test_three_bit_flips_suggest_sum(self):
        rank, suggestion = classify_scenario(ghz(3), sampled(["BF"] * 3, 21))
        assert rank == 4
        assert suggestion == identity_for("sum", 3)

    def test_four_phase_flips_suggest_product(self):
        rank, suggestion = classify_scenario(ghz(4), sampled(["PF"] * 4, 22))
        assert rank == 2
        assert suggestion == identity_for("product", 4)

    def test_rank_eight_suggests_nothing(self):
        rank, suggestion = classify_scenario(ghz(3), sampled(["BPF"] * 3, 23))
        assert rank == 8
        assert suggestion is None

    def test_two_qubit_rank_four_suggests_nothing(self):
        chans = (flip_channel("BF", 0.2), flip_channel("PF", 0.3))
        rank, suggestion = classify_scenario(bell(SQ2), chans)
        assert rank == 4
        assert suggestion is None


class TestRelabel:
    def test_relabeled_scenario_matches_direct_pattern(self):
        chans = (flip_channel("BF", 0.17), flip_channel("PF", 0.29), flip_channel("PF", 0.38))
        psi2, chans2 = relabel_scenario(ghz(3), chans, (3, 2, 1))
        assert [c.label for c in chans2] == ["PF", "PF", "BF"]
        direct = evaluate_identity(
            identity_for("sum", 3), ghz(3),
            (flip_channel("PF", 0.38), flip_channel("PF", 0.29), flip_channel("BF", 0.17)))
        relabeled = evaluate_identity(identity_for("sum", 3), psi2, chans2, relabeling=(3, 2, 1))
        assert abs(direct.lhs - relabeled.lhs) <= 1e-12
        assert abs(direct.rhs - relabeled.rhs) <= 1e-12
        assert relabeled.relabeling == (3, 2, 1)


class TestCampaign:
    def test_zero_samples_vacuous(self):
        config = CampaignConfig(state="bell", channels=("BF", "BF"), samples=0)
        report = run_campaign(config)
        assert report.rows == ()
        assert report.buckets == {}

    def test_bell_same_family_all_pass(self):
        config = CampaignConfig(state="bell", channels=("BF", "BF"), samples=100, seed=5)
        report = run_campaign(config)
        bucket = report.buckets[2]
        assert bucket.samples == bucket.evaluated == bucket.passed == 100
        assert bucket.max_residual <= 1e-8
        assert bucket.failure_seeds == ()

    def test_deterministic_csv(self):
        config = CampaignConfig(state="ghz3", channels=("PF", "PF", "PF"), samples=25, seed=3)
        assert run_campaign(config).to_csv() == run_campaign(config).to_csv()

    def test_auto_skips_high_rank(self):
        config = CampaignConfig(state="ghz3", channels=("BPF", "BPF", "BPF"),
                                samples=10, seed=1)
        report = run_campaign(config)
        assert report.buckets[8].evaluated == 0
        assert all(r.residual is None for r in report.rows)

    def test_forced_identity_and_failure_examples(self):
        config = CampaignConfig(state="ghz3", channels=("BF", "BF", "BF"), samples=30,
                                seed=11, identity="sum")
        report = run_campaign(config)
        bucket = report.buckets[4]
        assert bucket.evaluated == bucket.samples
        assert bucket.passed == 0  # plain sum never matches
        assert len(bucket.failure_seeds) == 10
        assert bucket.failure_seeds == tuple(sorted(bucket.failure_seeds))

    def test_rms_campaign_passes(self):
        config = CampaignConfig(state="w3", channels=("PF", "PF", "PF"), samples=30,
                                seed=13, identity="sum", aggregation="rms")
        report = run_campaign(config)
        assert report.buckets[3].passed == 30

    def test_arity_validation(self):
        config = CampaignConfig(state="ghz3", channels=("BF", "BF"), samples=1)
        with pytest.raises(DimensionMismatchError):
            run_campaign(config)

    def test_config_json_round_trip(self):
        config = CampaignConfig.from_json(json.dumps({
            "state": "ghz4", "channels": ["PF", "PF", "PF", "BF"], "samples": 5,
            "identity": "sum", "cut": "12|34", "normalization_exponent": "auto",
        }))
        assert config.cut == "12|34"
        assert config.normalization_exponent is None
        assert CampaignConfig.from_json(config.to_json_dict()) == config

    def test_config_rejects_unknown_fields(self):
        with pytest.raises(ValueError):
            CampaignConfig.from_json({"state": "bell", "channels": ["BF", "BF"],
                                      "samples": 1, "mode": "fast"})

    def test_csv_shape(self):
        config = CampaignConfig(state="bell", channels=("PF", "PF"), samples=4, seed=2)
        lines = run_campaign(config).to_csv().strip().split("\n")
        assert lines[0].startswith("# {")
        assert lines[1] == "seed,rank,lhs,rhs,residual,pass"
        assert len(lines) == 2 + 4 + 1
        assert lines[-1].startswith("# summary ")
        summary = json.loads(lines[-1].removeprefix("# summary "))
        assert summary["2"]["passed"] == 4
