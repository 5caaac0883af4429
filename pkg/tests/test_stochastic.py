import itertools
import math

import numpy as np
import pytest

from qtypicality import (
    QuantumStructure,
    SSet,
    SchemaError,
    StochasticProcessSpec,
    TimeRangeError,
    ValidationError,
    build_beamsplitter_fig1,
    build_unruh,
    correspondence_audit,
    cylinder_measure,
    matched_markov_chain,
    mu_sset,
    mu_symmetric_difference,
    mu_typicality,
    occupations,
    process_from_dict,
    process_to_dict,
)

IDENTITY2 = np.eye(2)
MIXING2 = np.full((2, 2), 0.5)


@pytest.fixture
def identity_chain():
    return StochasticProcessSpec(["U", "D"], [0.5, 0.5], [IDENTITY2, IDENTITY2])


@pytest.fixture
def mixing_chain():
    return StochasticProcessSpec(["U", "D"], [1.0, 0.0], [MIXING2, MIXING2])


class TestSpecValidation:
    def test_duplicate_labels(self):
        with pytest.raises(ValidationError):
            StochasticProcessSpec(["U", "U"], [0.5, 0.5], [IDENTITY2])

    def test_bad_initial(self):
        with pytest.raises(ValidationError):
            StochasticProcessSpec(["U", "D"], [0.7, 0.7], [IDENTITY2])
        with pytest.raises(ValidationError):
            StochasticProcessSpec(["U", "D"], [1.5, -0.5], [IDENTITY2])

    def test_bad_kernel(self):
        with pytest.raises(ValidationError):
            StochasticProcessSpec(["U", "D"], [0.5, 0.5], [np.ones((2, 2))])
        with pytest.raises(ValidationError):
            StochasticProcessSpec(["U", "D"], [0.5, 0.5], [np.eye(3)])

    def test_marginal_time_range(self, identity_chain):
        with pytest.raises(TimeRangeError):
            identity_chain.marginal(3)


class TestCylinderMeasure:
    def test_empty_family_is_one(self, identity_chain):
        assert cylinder_measure(identity_chain, []) == 1.0

    def test_identity_kernel_diagonal(self, identity_chain):
        same = [SSet(0, {"U"}), SSet(2, {"U"})]
        crossed = [SSet(0, {"U"}), SSet(2, {"D"})]
        assert cylinder_measure(identity_chain, same) == pytest.approx(0.5)
        assert cylinder_measure(identity_chain, crossed) == 0.0

    def test_mixing_kernel(self, mixing_chain):
        assert mu_sset(mixing_chain, SSet(1, {"U"})) == pytest.approx(0.5)
        assert cylinder_measure(
            mixing_chain, [SSet(1, {"U"}), SSet(2, {"D"})]
        ) == pytest.approx(0.25)

    def test_equal_time_regions_intersect(self, identity_chain):
        measure = cylinder_measure(identity_chain, [SSet(1, {"U", "D"}), SSet(1, {"U"})])
        assert measure == pytest.approx(0.5)

    def test_additivity_over_first_slot(self, mixing_chain):
        s2 = SSet(2, {"U"})
        total = mu_sset(mixing_chain, s2)
        split = sum(
            cylinder_measure(mixing_chain, [SSet(1, {lab}), s2]) for lab in ("U", "D")
        )
        assert total == pytest.approx(split, abs=1e-14)

    def test_kolmogorov_consistency(self, mixing_chain):
        # summing out an intermediate full-space constraint changes nothing
        base = cylinder_measure(mixing_chain, [SSet(0, {"U"}), SSet(2, {"D"})])
        padded = cylinder_measure(
            mixing_chain, [SSet(0, {"U"}), SSet(1, {"U", "D"}), SSet(2, {"D"})]
        )
        assert base == pytest.approx(padded, abs=1e-14)

    def test_time_out_of_range(self, identity_chain):
        with pytest.raises(TimeRangeError):
            cylinder_measure(identity_chain, [SSet(5, {"U"})])

    def test_unknown_state(self, identity_chain):
        with pytest.raises(SchemaError):
            cylinder_measure(identity_chain, [SSet(1, {"X"})])


class TestSymmetricDifference:
    def test_identical_ssets(self, mixing_chain):
        s = SSet(1, {"U"})
        assert mu_symmetric_difference(mixing_chain, s, s) == 0.0

    def test_equal_time_complement(self, mixing_chain):
        sd = mu_symmetric_difference(mixing_chain, SSet(1, {"U"}), SSet(1, {"D"}))
        assert sd == pytest.approx(1.0)

    def test_report_values(self, identity_chain):
        report = mu_typicality(identity_chain, SSet(0, {"U"}), SSet(2, {"U"}))
        assert report.m_big == 0.0
        assert report.norm1_sq == pytest.approx(0.5)


class TestMatchedChain:
    def test_unruh_marginals_match(self):
        structure = build_unruh().structure
        chain = matched_markov_chain(structure)
        for t in structure.times:
            occ = occupations(structure, t)
            marginal = chain.marginal(t)
            for i, label in enumerate(chain.states):
                assert marginal[i] == pytest.approx(occ[label], abs=1e-10)

    def test_beamsplitter_transfer_kernel(self):
        structure = build_beamsplitter_fig1()
        chain = matched_markov_chain(structure)
        # first step splits evenly, second step is which-way deterministic
        np.testing.assert_allclose(chain.kernels[0][0], [0.5, 0.5], atol=1e-12)
        np.testing.assert_allclose(chain.kernels[1], np.eye(2), atol=1e-12)

    def test_fig1_matched_measure_agrees_with_chained_norm(self):
        structure = build_beamsplitter_fig1()
        chain = matched_markov_chain(structure)
        from qtypicality import chain_project

        for arm in ("A", "B"):
            ssets = [SSet(1, {arm}), SSet(2, {arm})]
            assert cylinder_measure(chain, ssets) == pytest.approx(
                chain_project(structure, ssets).norm_sq, abs=1e-12
            )


class TestCorrespondenceAudit:
    def test_unruh_audit(self):
        structure = build_unruh().structure
        audit = correspondence_audit(structure, matched_markov_chain(structure))
        assert audit.c3_pass and audit.c3_max_error <= 1e-10
        assert audit.c5_pass
        assert audit.c7_mu_additive
        # the interferometer is the canonical nonadditivity witness
        assert audit.c7_witness is not None
        assert audit.c7_max_defect == pytest.approx(0.5, abs=1e-12)
        assert audit.passed

    def test_fig1_audit_no_witness(self):
        structure = build_beamsplitter_fig1()
        audit = correspondence_audit(structure, matched_markov_chain(structure))
        assert audit.passed
        assert audit.c7_witness is None

    def test_trivial_structure_fully_classical(self):
        structure = QuantumStructure(
            2,
            [1 / math.sqrt(2), 1 / math.sqrt(2)],
            [np.eye(2, dtype=complex)] * 2,
            {"U": [0], "D": [1]},
        )
        audit = correspondence_audit(structure, matched_markov_chain(structure))
        assert audit.passed
        assert audit.c7_max_defect == pytest.approx(0.0, abs=1e-12)

    def test_label_mismatch_rejected(self):
        structure = build_unruh().structure
        chain = StochasticProcessSpec(["A", "B"], [0.5, 0.5], [IDENTITY2] * 3)
        with pytest.raises(ValidationError):
            correspondence_audit(structure, chain)

    def test_step_count_mismatch_needs_pairing(self):
        structure = build_unruh().structure
        chain = StochasticProcessSpec(["U", "D"], [0.0, 1.0], [IDENTITY2])
        with pytest.raises(ValidationError):
            correspondence_audit(structure, chain)

    def test_mismatched_chain_fails_c3(self):
        structure = build_unruh().structure
        wrong = StochasticProcessSpec(["U", "D"], [1.0, 0.0], [IDENTITY2] * 3)
        audit = correspondence_audit(structure, wrong)
        assert not audit.c3_pass
        assert not audit.passed

    def test_audit_serialization(self):
        structure = build_beamsplitter_fig1()
        data = correspondence_audit(structure, matched_markov_chain(structure)).to_dict()
        assert data["passed"] is True
        assert set(data) == {"c3", "c5", "c7", "passed"}


class TestSerialization:
    def test_round_trip(self, mixing_chain):
        restored = process_from_dict(process_to_dict(mixing_chain))
        assert restored.states == mixing_chain.states
        np.testing.assert_allclose(restored.initial, mixing_chain.initial)
        for a, b in itertools.zip_longest(restored.kernels, mixing_chain.kernels):
            np.testing.assert_allclose(a, b)

    def test_missing_key(self):
        with pytest.raises(SchemaError):
            process_from_dict({"states": ["U", "D"], "initial": [0.5, 0.5]})
