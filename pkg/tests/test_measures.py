import json
import math

import numpy as np
import pytest  # type: ignore[import-not-found]
from hypothesis import given, settings, strategies as st

from feilab.errors import DomainError, InvalidSpectrumError
from feilab.families import FamilySpec, named_function, random_function
from feilab.measures import (
    entropy,
    fei_report,
    influence_combinatorial,
    influence_coord,
    influence_total,
    influence_vector,
)
from feilab.spectrum import (
    Spectrum,
    TruthTable,
    coefficient_naive,
    spectrum_of,
)
from tests.enums import KnownRatio, KnownTable, Tolerance

MEASURE = Tolerance.MEASURE.value


def named(text: str) -> TruthTable:
    return named_function(FamilySpec.parse(text))


def naive_measures(tt: TruthTable) -> tuple[float, float]:
    """Entropy and total influence from one-at-a-time coefficients."""
    weights = np.array(
        [coefficient_naive(tt, mask) ** 2 for mask in range(tt.size)]
    )
    degrees = np.array([bin(mask).count("1") for mask in range(tt.size)])
    positive = weights[weights > 0]
    return (
        float(-np.sum(positive * np.log2(positive))),
        float(np.sum(weights * degrees)),
    )


def test_parity_measures(parity3):
    """Test the measures of full parity."""
    spec = spectrum_of(parity3)
    assert entropy(spec) == 0.0
    assert influence_total(spec) == 3.0
    assert influence_vector(spec) == (1.0, 1.0, 1.0)


def test_constant_measures(constant4):
    """Test the report of a constant function."""
    report = fei_report(constant4, 2.0)
    assert report.entropy == 0.0
    assert report.influence_total == 0.0
    assert report.ratio is None
    assert report.satisfies is True


def test_majority_measures(majority3):
    """Test the measures of majority."""
    spec = spectrum_of(majority3)
    assert entropy(spec) == pytest.approx(2.0, abs=MEASURE)
    assert influence_total(spec) == pytest.approx(1.5, abs=MEASURE)
    for i in range(3):
        assert influence_coord(spec, i) == pytest.approx(0.5, abs=MEASURE)
        assert influence_combinatorial(majority3, i) == 0.5


def test_majority_report(majority3):
    """Test the report of majority."""
    report = fei_report(majority3, 2.0)
    assert report.ratio == pytest.approx(KnownRatio.MAJORITY_3.value)
    assert report.satisfies is True
    assert report.constant_c == 2.0


def test_and_report_sits_on_the_boundary(and2):
    """AND meets the inequality with equality."""
    report = fei_report(and2, 2.0)
    assert report.entropy == pytest.approx(2.0, abs=MEASURE)
    assert report.influence_total == pytest.approx(1.0, abs=MEASURE)
    assert report.ratio == pytest.approx(KnownRatio.AND_2.value)
    assert report.satisfies is True


def test_or_matches_and_up_to_negation():
    """OR has the ratio of AND."""
    or2 = TruthTable.from_hex(KnownTable.OR_2.value)
    report = fei_report(or2, 2.0)
    assert report.ratio == pytest.approx(KnownRatio.AND_2.value)


def test_single_point_ratio():
    """The single-point function violates the inequality."""
    tt = TruthTable.from_hex(KnownTable.SINGLE_POINT_3.value)
    report = fei_report(tt, 2.0)
    assert report.ratio == pytest.approx(KnownRatio.SINGLE_POINT_3.value)
    assert report.satisfies is False


def test_parity_satisfies_any_constant():
    """Parity satisfies every positive constant."""
    report = fei_report(named("named:parity,n=4"), 0.1)
    assert report.entropy == 0.0
    assert report.ratio == 0.0
    assert report.satisfies is True


def test_dictator_influence_vector():
    """Test the influence vector of a dictator."""
    spec = spectrum_of(named("named:dictator,n=3,i=0"))
    assert influence_vector(spec) == (1.0, 0.0, 0.0)


def test_dictator_combinatorial_influence():
    """Test the flip influence of a dictator."""
    dictator = named("named:dictator,n=2,i=0")
    assert influence_combinatorial(dictator, 0) == 1.0
    assert influence_combinatorial(dictator, 1) == 0.0


@pytest.mark.parametrize("i", [-1, 3])
def test_coordinate_range(majority3, i):
    """Test the coordinate range."""
    with pytest.raises(DomainError):
        influence_coord(spectrum_of(majority3), i)
    with pytest.raises(DomainError):
        influence_combinatorial(majority3, i)


def test_entropy_requires_parseval():
    """Entropy needs a spectrum of unit weight."""
    with pytest.raises(InvalidSpectrumError):
        entropy(Spectrum(1, [1.0, 1.0]))


@pytest.mark.parametrize("c", [0.0, -1.0, math.inf, math.nan])
def test_constant_must_be_positive(majority3, c):
    """The constant must be positive and finite."""
    with pytest.raises(DomainError):
        fei_report(majority3, c)


def test_structural_facts_on_small_arities(small_tables):
    """Bounds and influence identities hold for every small function."""
    for tt in small_tables:
        report = fei_report(tt, 2.0)
        assert 0.0 <= report.entropy <= tt.n + MEASURE
        assert 0.0 <= report.influence_total <= tt.n + MEASURE
        assert report.influence_total == pytest.approx(
            sum(report.influence_per_coord), abs=MEASURE
        )
        for i, value in enumerate(report.influence_per_coord):
            assert abs(value - influence_combinatorial(tt, i)) <= MEASURE
        constant = tt.to_int() in (0, (1 << tt.size) - 1)
        assert (report.ratio is None) == constant


def test_spectral_and_combinatorial_influence_agree_at_arity_10():
    """Both influence routes agree on random functions."""
    for trial in range(1000):
        tt = random_function(10, 31, trial)
        spec = spectrum_of(tt)
        for i in range(10):
            assert (
                abs(influence_coord(spec, i) - influence_combinatorial(tt, i))
                <= MEASURE
            )


@settings(max_examples=100, deadline=None)
@given(
    trial=st.integers(min_value=0, max_value=10_000),
    c1=st.floats(min_value=0.01, max_value=10.0),
    extra=st.floats(min_value=0.0, max_value=10.0),
)
def test_satisfaction_is_monotone_in_c(trial, c1, extra):
    """Satisfaction at C implies satisfaction at every larger C."""
    tt = random_function(5, 17, trial)
    if fei_report(tt, c1).satisfies:
        assert fei_report(tt, c1 + extra).satisfies


def test_report_serialises_flat(constant4):
    """Test the report document."""
    document = json.loads(json.dumps(fei_report(constant4, 2.0).to_dict()))
    assert document == {
        "n": 4,
        "entropy": 0.0,
        "influence_total": 0.0,
        "influence_per_coord": [0.0, 0.0, 0.0, 0.0],
        "ratio": None,
        "constant_c": 2.0,
        "satisfies": True,
    }


@pytest.mark.parametrize(
    "tt, expected_entropy, expected_influence",
    [
        (TruthTable.from_hex(KnownTable.MAJORITY_3.value), 2.0, 1.5),
        (TruthTable.from_hex(KnownTable.OR_2.value), 2.0, 1.0),
        (TruthTable.from_hex(KnownTable.AND_2.value), 2.0, 1.0),
        (named("named:parity,n=3"), 0.0, 3.0),
        (named("named:parity,n=4,mask=5"), 0.0, 2.0),
    ],
    ids=["majority", "or", "and", "parity", "partial-parity"],
)
def test_known_values_agree_with_naive_coefficients(
    tt, expected_entropy, expected_influence
):
    """Known entropy and influence hold for both coefficient routes."""
    naive_entropy, naive_influence = naive_measures(tt)
    report = fei_report(tt, 2.0)
    assert naive_entropy == pytest.approx(expected_entropy, abs=MEASURE)
    assert naive_influence == pytest.approx(expected_influence, abs=MEASURE)
    assert report.entropy == pytest.approx(naive_entropy, abs=MEASURE)
    assert report.influence_total == pytest.approx(
        naive_influence, abs=MEASURE
    )
