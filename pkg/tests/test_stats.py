import itertools
import math

import numpy as np
import pytest

from qtypicality import (
    ExperimentSpec,
    ResourceLimitError,
    SSet,
    ValidationError,
    atypical_region,
    born_frequency_report,
    build_measurement_chain,
    deviation,
    exclusion_measure,
    frequency,
    occupations,
    typical_region,
    typical_set_bound,
    typical_set_complement_mass,
)


def brute_force_mass(spec):
    """Direct enumeration over every outcome sequence; the slow oracle."""
    mass = 0.0
    for seq in itertools.product(range(spec.n), repeat=spec.N):
        if deviation(seq, spec.probs) >= spec.epsilon:
            weight = 1.0
            for s in seq:
                weight *= spec.probs[s]
            mass += weight
    return mass


class TestSpecValidation:
    def test_probs_must_sum_to_one(self):
        with pytest.raises(ValidationError):
            ExperimentSpec(2, (0.5, 0.4), 4, 0.1)

    def test_negative_prob(self):
        with pytest.raises(ValidationError):
            ExperimentSpec(2, (1.2, -0.2), 4, 0.1)

    def test_bad_repetitions_and_cutoff(self):
        with pytest.raises(ValidationError):
            ExperimentSpec(2, (0.5, 0.5), 0, 0.1)
        with pytest.raises(ValidationError):
            ExperimentSpec(2, (0.5, 0.5), 4, 0.0)


class TestFrequencyAndDeviation:
    def test_constant_sequence(self):
        assert frequency(1, [1, 1, 1, 1]) == 1.0

    def test_balanced_sequence(self):
        assert frequency(0, [0, 1, 0, 1]) == 0.5

    def test_frequencies_partition(self):
        seq = [0, 2, 1, 2, 2, 0]
        assert sum(frequency(s, seq) for s in range(3)) == pytest.approx(1.0)

    def test_empty_sequence_rejected(self):
        with pytest.raises(ValidationError):
            frequency(0, [])
        with pytest.raises(ValidationError):
            deviation([], (0.5, 0.5))

    def test_exact_frequencies_give_zero(self):
        assert deviation([0, 1, 0, 1], (0.5, 0.5)) == 0.0

    def test_all_zeros_half_half(self):
        assert deviation([0, 0, 0, 0, 0], (0.5, 0.5)) == pytest.approx(0.5)

    def test_three_one_split(self):
        assert deviation([0, 0, 0, 1], (0.5, 0.5)) == pytest.approx(0.125)

    def test_outcome_out_of_range(self):
        with pytest.raises(ValidationError):
            deviation([0, 2], (0.5, 0.5))


class TestComplementMass:
    def test_matches_brute_force_on_small_specs(self, rng):
        for _ in range(20):
            n = int(rng.integers(2, 4))
            p = rng.dirichlet(np.ones(n))
            spec = ExperimentSpec(n, p, int(rng.integers(1, 8)), float(rng.uniform(0.02, 0.5)))
            assert typical_set_complement_mass(spec) == pytest.approx(
                brute_force_mass(spec), abs=1e-12
            )

    def test_frozen_point_value(self):
        spec = ExperimentSpec(2, (0.5, 0.5), 16, 0.125)
        assert typical_set_complement_mass(spec) == pytest.approx(
            5034 / 65536, abs=1e-12
        )
        assert typical_set_bound(spec) == pytest.approx(0.5)

    def test_cutoff_beyond_max_deviation(self):
        spec = ExperimentSpec(2, (0.5, 0.5), 8, 3.0)
        assert typical_set_complement_mass(spec) == 0.0

    def test_single_trial_everything_atypical(self):
        spec = ExperimentSpec(2, (0.5, 0.5), 1, 0.4)
        assert typical_set_complement_mass(spec) == pytest.approx(1.0)
        assert typical_set_bound(spec) == pytest.approx(2.5)

    def test_bound_holds_and_mass_shrinks_with_epsilon(self):
        masses = []
        for eps in (0.02, 0.05, 0.1, 0.25, 0.5):
            spec = ExperimentSpec(2, (0.5, 0.5), 12, eps)
            mass = typical_set_complement_mass(spec)
            assert mass < typical_set_bound(spec)
            masses.append(mass)
        assert all(a >= b for a, b in zip(masses, masses[1:]))

    def test_resource_guard(self):
        spec = ExperimentSpec(64, (1 / 64,) * 64, 64, 0.1)
        with pytest.raises(ResourceLimitError):
            typical_set_complement_mass(spec)


class TestMeasurementChain:
    def test_single_measurement_occupations(self):
        spec = ExperimentSpec(2, (0.36, 0.64), 1, 0.1)
        structure = build_measurement_chain(spec)
        occ = occupations(structure, 1)
        assert occ["0"] == pytest.approx(0.36, abs=1e-12)
        assert occ["1"] == pytest.approx(0.64, abs=1e-12)

    def test_sequence_occupations_are_products(self, rng):
        p = rng.dirichlet(np.ones(2))
        spec = ExperimentSpec(2, p, 4, 0.1)
        structure = build_measurement_chain(spec)
        occ = occupations(structure, 4)
        for seq in itertools.product(range(2), repeat=4):
            expected = math.prod(p[s] for s in seq)
            assert occ[",".join(map(str, seq))] == pytest.approx(expected, abs=1e-10)

    def test_exclusion_matches_combinatorial_mass(self):
        spec = ExperimentSpec(2, (0.5, 0.5), 10, 0.1)
        structure = build_measurement_chain(spec)
        excl = exclusion_measure(structure, SSet(10, typical_region(spec)))
        assert excl == pytest.approx(typical_set_complement_mass(spec), abs=1e-10)

    def test_typical_and_atypical_regions_partition(self):
        spec = ExperimentSpec(2, (0.3, 0.7), 6, 0.1)
        assert len(typical_region(spec)) + len(atypical_region(spec)) == 2**6
        assert not (typical_region(spec) & atypical_region(spec))

    def test_single_outcome_trivial(self):
        spec = ExperimentSpec(1, (1.0,), 5, 0.5)
        structure = build_measurement_chain(spec)
        assert occupations(structure, 5) == {"0,0,0,0,0": pytest.approx(1.0)}
        assert typical_set_complement_mass(spec) == 0.0

    def test_dimension_guard(self):
        spec = ExperimentSpec(2, (0.5, 0.5), 21, 0.1)
        with pytest.raises(ResourceLimitError):
            build_measurement_chain(spec)


class TestBornFrequencyReport:
    def test_half_half(self):
        np.testing.assert_allclose(
            born_frequency_report(ExperimentSpec(2, (0.5, 0.5), 100, 0.1)), [50, 50]
        )

    def test_weighted(self):
        np.testing.assert_allclose(
            born_frequency_report(ExperimentSpec(2, (0.36, 0.64), 25, 0.1)), [9, 16]
        )

    def test_deterministic(self):
        np.testing.assert_allclose(
            born_frequency_report(ExperimentSpec(2, (1.0, 0.0), 7, 0.1)), [7, 0]
        )
