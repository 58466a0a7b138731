import numpy as np
import pytest  # type: ignore[import-not-found]
from hypothesis import given, settings, strategies as st

from feilab.config import override_settings
from feilab.errors import (
    CapacityError,
    DomainError,
    InvalidSpectrumError,
    NotBooleanError,
)
from feilab.families import (
    FamilySpec,
    RandomFamily,
    named_function,
    random_function,
)
from feilab.spectrum import (
    Spectrum,
    TruthTable,
    character,
    coefficient_naive,
    fwht,
    spectrum_of,
    truth_table_of,
)
from tests.enums import KnownTable, Tolerance

COEFFICIENT = Tolerance.COEFFICIENT.value
MEASURE = Tolerance.MEASURE.value


@st.composite
def tables(draw, max_arity=6):
    n = draw(st.integers(min_value=1, max_value=max_arity))
    value = draw(st.integers(min_value=0, max_value=(1 << (1 << n)) - 1))
    return TruthTable.from_int(n, value)


def test_dictator_spectrum():
    """Test the spectrum of a dictator."""
    tt = TruthTable.from_hex(KnownTable.DICTATOR_1.value)
    assert spectrum_of(tt).coeffs.tolist() == [0.0, 1.0]


def test_constant_spectrum(constant4):
    """Test the spectrum of a constant."""
    coeffs = spectrum_of(constant4).coeffs
    assert coeffs[0] == 1.0
    assert not coeffs[1:].any()


def test_majority_spectrum(majority3):
    """Majority coefficients by both transforms."""
    expected = [0.0, 0.5, 0.5, 0.0, 0.5, 0.0, 0.0, -0.5]
    spec = spectrum_of(majority3)
    assert spec.coeffs.tolist() == expected
    for mask in range(8):
        assert coefficient_naive(majority3, mask) == expected[mask]


def test_and_spectrum(and2):
    """Test the spectrum of AND."""
    assert spectrum_of(and2).coeffs.tolist() == [0.5, 0.5, 0.5, -0.5]


def test_naive_coefficient_of_character():
    """Each character correlates fully with itself."""
    for mask in range(16):
        chi = TruthTable.from_signs(4, character(4, mask))
        assert coefficient_naive(chi, mask) == 1.0


def test_naive_coefficient_of_constant(constant4):
    """A constant has no weight off the empty set."""
    for mask in range(1, 16):
        assert coefficient_naive(constant4, mask) == 0.0


@pytest.mark.parametrize("n", range(1, 7))
def test_characters_are_orthonormal(n):
    """Characters transform to point masses."""
    for mask in range(1 << n):
        spec = FamilySpec.parse(f"named:parity,n={n},mask={mask}")
        chi = named_function(spec)
        indicator = np.zeros(1 << n)
        indicator[mask] = 1.0
        assert np.array_equal(spectrum_of(chi).coeffs, indicator)


def test_transform_matches_naive_on_small_arities(small_tables):
    """The fast transform matches the naive one for every small function."""
    for tt in small_tables:
        coeffs = spectrum_of(tt).coeffs
        naive = [coefficient_naive(tt, mask) for mask in range(tt.size)]
        assert np.allclose(coeffs, naive, rtol=0.0, atol=COEFFICIENT)
        assert abs(np.sum(coeffs**2) - 1.0) <= MEASURE


def test_transform_matches_character_sums_at_arity_10():
    """The fast transform matches character sums on random functions."""
    n = 10
    basis = np.stack([character(n, mask) for mask in range(1 << n)])
    signs = RandomFamily(n, seed=2024, trials=1000).sign_block(0, 1000)
    naive = signs @ basis.T / (1 << n)
    fast = fwht(signs.copy()) * 2.0**-n
    assert np.max(np.abs(fast - naive)) <= COEFFICIENT
    assert np.max(np.abs(np.sum(fast**2, axis=1) - 1.0)) <= MEASURE


def test_round_trip_of_seeded_tables():
    """Tables survive a transform and its inverse."""
    for trial in range(1000):
        tt = random_function(8, 99, trial)
        assert truth_table_of(spectrum_of(tt)) == tt


def test_inverse_of_point_mass():
    """Test inverting point masses."""
    assert truth_table_of(Spectrum(3, np.eye(8)[0])).to_int() == 0
    assert truth_table_of(Spectrum(1, [0.0, 1.0])) == TruthTable.from_hex(
        KnownTable.DICTATOR_1.value
    )


def test_inverse_rejects_non_boolean_spectrum():
    """Test inverting a spectrum of no boolean function."""
    with pytest.raises(NotBooleanError):
        truth_table_of(Spectrum(1, [0.5, 0.5]))


@settings(max_examples=100, deadline=None)
@given(tt=tables())
def test_parseval_and_round_trip(tt):
    """Spectra have unit weight and invert to the table."""
    spec = spectrum_of(tt)
    assert spec.parseval_defect() <= MEASURE
    assert truth_table_of(spec) == tt


@settings(max_examples=50, deadline=None)
@given(tt=tables())
def test_negation_flips_every_coefficient(tt):
    """Test negating a function."""
    assert np.array_equal(
        spectrum_of(tt.negate()).coeffs, -spectrum_of(tt).coeffs
    )


def test_weight_by_degree(majority3):
    """Test the weight by degree of majority."""
    weights = spectrum_of(majority3).weight_by_degree()
    assert weights.tolist() == [0.0, 0.75, 0.0, 0.25]


def test_spectrum_csv(and2):
    """Test the spectrum CSV."""
    assert spectrum_of(and2).to_csv().splitlines() == [
        "mask,coefficient",
        "0,0.5",
        "1,0.5",
        "2,0.5",
        "3,-0.5",
    ]


def test_spectrum_is_read_only(and2):
    """Test that coefficients are read only."""
    spec = spectrum_of(and2)
    with pytest.raises(ValueError):
        spec.coeffs[0] = 1.0


def test_spectrum_length_checked():
    """Test the spectrum length check."""
    with pytest.raises(InvalidSpectrumError):
        Spectrum(2, [1.0, 0.0])


@pytest.mark.parametrize("mask", [-1, 8])
def test_naive_coefficient_mask_range(majority3, mask):
    """Test the mask range."""
    with pytest.raises(DomainError):
        coefficient_naive(majority3, mask)


def test_arity_cap_is_enforced():
    """Test the arity cap."""
    with override_settings(arity_cap=4):
        with pytest.raises(CapacityError):
            TruthTable.from_int(5, 0)


def test_hex_literals(majority3):
    """Test reading and writing hex literals."""
    assert majority3.to_hex() == KnownTable.MAJORITY_3.value
    assert TruthTable.from_hex(KnownTable.MAJORITY_3.value) == majority3
    assert TruthTable.from_hex("n=1:2")[1] == -1
    assert TruthTable.from_hex("n=1:2")[0] == 1


@pytest.mark.parametrize(
    "text", ["3:8e", "n=3:8", "n=3:8g", "n=3:8_e", "n=x:8e", "n=1:4"]
)
def test_hex_rejects_malformed(text):
    """Malformed hex literals are domain errors."""
    with pytest.raises(DomainError):
        TruthTable.from_hex(text)


def test_table_rejects_padding_bits():
    """Bits past the last point are rejected."""
    with pytest.raises(DomainError):
        TruthTable(1, bytes([0b100]))


def test_from_signs_rejects_non_boolean():
    """Signs must be +1 or -1."""
    with pytest.raises(NotBooleanError):
        TruthTable.from_signs(1, np.array([1.0, 0.0]))


def test_transform_rejects_odd_lengths():
    """Test that the transform needs a power of two."""
    with pytest.raises(DomainError):
        fwht(np.ones(6))
