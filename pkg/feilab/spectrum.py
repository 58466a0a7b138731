"""
Truth tables of boolean functions and their Fourier-Walsh spectra.

Point ``k`` of the hypercube ``{-1, 1}^n`` is the input whose coordinate
``x_i`` equals ``-1`` exactly when bit ``i`` of ``k`` is set, so point 0 is
the all-ones input. A truth table stores one bit per point: a set bit
means ``f(k) = -1``. Subsets ``S`` of the coordinates are bitmasks with
the same bit numbering, and ``chi_S(k) = (-1) ** popcount(S & k)``.
"""

import io
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from feilab.config import get_settings
from feilab.errors import (
    CapacityError,
    DomainError,
    InvalidSpectrumError,
    NotBooleanError,
)

BOOLEAN_TOLERANCE = 1e-6
HEX_DIGITS = frozenset("0123456789abcdefABCDEF")


def check_arity(n: int) -> int:
    """
    Validate an arity against the configured cap.

    Raises:
        DomainError: If ``n`` is not a positive integer.
        CapacityError: If ``n`` exceeds the active arity cap.
    """
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise DomainError(f"arity must be a positive integer, got {n!r}")
    cap = get_settings().arity_cap
    if n > cap:
        raise CapacityError(
            f"arity {n} exceeds the configured cap {cap}; "
            "raise it with FEI_ARITY_CAP or --arity-cap"
        )
    return int(n)


def parity(values: np.ndarray) -> np.ndarray:
    """Bit parity of every non-negative 64-bit integer in ``values``."""
    x = np.asarray(values, dtype=np.uint64).copy()
    for shift in (32, 16, 8, 4, 2, 1):
        x ^= x >> np.uint64(shift)
    return (x & np.uint64(1)).astype(np.uint8)


@lru_cache(maxsize=32)
def popcounts(n: int) -> np.ndarray:
    """Read-only ``popcount(k)`` for every ``k < 2**n``."""
    counts = np.zeros(1 << n, dtype=np.int64)
    for i in range(n):
        counts[1 << i : 2 << i] = counts[: 1 << i] + 1
    counts.flags.writeable = False
    return counts


def character(n: int, mask: int) -> np.ndarray:
    """The character ``chi_S`` as a +1/-1 vector over all points."""
    points = np.arange(1 << n, dtype=np.uint64)
    return 1.0 - 2.0 * parity(points & np.uint64(mask))


def fwht(values: np.ndarray) -> np.ndarray:
    """
    Unnormalised Walsh-Hadamard transform along the last axis, in place.

    Radix-2 butterflies over a power-of-two last axis; leading axes are a
    batch. ``fwht(fwht(v)) == 2**n * v``.

    Args:
        values (np.ndarray): C-contiguous float array, modified in place.

    Returns:
        np.ndarray: ``values``, now holding
        ``sum_k values[..., k] * (-1) ** popcount(S & k)`` at index ``S``.
    """
    size = values.shape[-1]
    if size & (size - 1):
        raise DomainError(f"transform length {size} is not a power of two")
    if not values.flags.c_contiguous:
        raise DomainError("transform buffer must be C-contiguous")
    batch = values.shape[:-1]
    half = 1
    while half < size:
        view = values.reshape(*batch, size // (2 * half), 2, half)
        low = view[..., 0, :].copy()
        high = view[..., 1, :]
        view[..., 0, :] += high
        np.subtract(low, high, out=high)
        half *= 2
    return values


@dataclass(frozen=True, slots=True)
class TruthTable:
    """
    A boolean function ``{-1, 1}^n -> {-1, 1}`` as ``2**n`` packed bits.

    Attributes:
        n (int): Arity.
        bits (bytes): Little-endian packed bits, bit ``k % 8`` of byte
            ``k // 8`` set when ``f(k) = -1``. Unused high bits are zero.
    """

    n: int
    bits: bytes

    def __post_init__(self):
        check_arity(self.n)
        if len(self.bits) != (self.size + 7) // 8:
            raise DomainError(
                f"{len(self.bits)} bytes cannot hold exactly "
                f"{self.size} points"
            )
        if self.size < 8 and self.bits[0] >> self.size:
            raise DomainError("bits set beyond the last point")

    @property
    def size(self) -> int:
        return 1 << self.n

    @classmethod
    def from_bits(cls, n: int, bits: np.ndarray) -> "TruthTable":
        """Build from a 0/1 vector of length ``2**n`` (1 means -1)."""
        flags = np.asarray(bits, dtype=np.uint8)
        if flags.shape != (1 << n,):
            raise DomainError(f"expected {1 << n} bits, got {flags.shape}")
        packed = np.packbits(flags, bitorder="little")
        return cls(n, packed.tobytes())

    @classmethod
    def from_signs(cls, n: int, signs: np.ndarray) -> "TruthTable":
        """Build from a +1/-1 vector of length ``2**n``."""
        values = np.asarray(signs)
        if not np.all(np.abs(values) == 1):
            raise NotBooleanError("truth table values must be +1 or -1")
        return cls.from_bits(n, values < 0)

    @classmethod
    def from_int(cls, n: int, value: int) -> "TruthTable":
        """Build from an integer whose bit ``k`` is the bit of point ``k``."""
        size = 1 << check_arity(n)
        if not 0 <= value < 1 << size:
            raise DomainError(f"value does not fit {size} points")
        return cls(n, value.to_bytes((size + 7) // 8, "little"))

    @classmethod
    def from_hex(cls, text: str) -> "TruthTable":
        """
        Parse ``"n=<arity>:<hex>"``.

        Hex digit ``j`` (counted from the left) holds points ``4j..4j+3``,
        point ``4j`` in its least significant bit, so the most significant
        digit comes last.

        Raises:
            DomainError: On a malformed literal or a digit count that does
                not match the arity.
        """
        head, sep, digits = text.strip().partition(":")
        if not sep or not head.startswith("n="):
            raise DomainError(f"expected 'n=<arity>:<hex>', got {text!r}")
        if not head[2:].isdigit() or not set(digits) <= HEX_DIGITS:
            raise DomainError(f"malformed truth table {text!r}")
        n = int(head[2:])
        size = 1 << check_arity(n)
        if len(digits) != (size + 3) // 4:
            raise DomainError(
                f"arity {n} needs {(size + 3) // 4} hex digits, "
                f"got {len(digits)}"
            )
        return cls.from_int(n, int(digits[::-1], 16))

    def to_int(self) -> int:
        return int.from_bytes(self.bits, "little")

    def to_hex(self) -> str:
        digits = (self.size + 3) // 4
        return f"n={self.n}:" + format(self.to_int(), f"0{digits}x")[::-1]

    def bit_vector(self) -> np.ndarray:
        """0/1 ``uint8`` vector over all points (1 means -1)."""
        octets = np.frombuffer(self.bits, dtype=np.uint8)
        return np.unpackbits(octets, count=self.size, bitorder="little")

    def signs(self) -> np.ndarray:
        """+1/-1 ``float64`` vector over all points."""
        return 1.0 - 2.0 * self.bit_vector()

    def negate(self) -> "TruthTable":
        return TruthTable.from_bits(self.n, 1 - self.bit_vector())

    def __getitem__(self, point: int) -> int:
        if not 0 <= point < self.size:
            raise DomainError(f"point {point} out of range")
        return -1 if self.bits[point >> 3] >> (point & 7) & 1 else 1

    def __repr__(self) -> str:
        return f"TruthTable({self.to_hex()!r})"


@dataclass(frozen=True, slots=True, eq=False)
class Spectrum:
    """
    The ``2**n`` Fourier coefficients of a function, indexed by mask.

    Attributes:
        n (int): Arity.
        coeffs (np.ndarray): Read-only ``float64`` coefficients.
    """

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        values = np.array(self.coeffs, dtype=np.float64)
        if values.shape != (1 << self.n,):
            raise InvalidSpectrumError(
                f"spectrum of arity {self.n} needs {1 << self.n} "
                f"coefficients, got shape {values.shape}"
            )
        values.flags.writeable = False
        object.__setattr__(self, "coeffs", values)

    def __getitem__(self, mask: int) -> float:
        return float(self.coeffs[mask])

    def __len__(self) -> int:
        return len(self.coeffs)

    def weights(self) -> np.ndarray:
        """Squared coefficients; a probability vector under Parseval."""
        return self.coeffs**2

    def parseval_defect(self) -> float:
        return abs(float(np.sum(self.weights())) - 1.0)

    def weight_by_degree(self) -> np.ndarray:
        """Fourier weight on each level ``|S| = 0..n``."""
        return np.bincount(
            popcounts(self.n), weights=self.weights(), minlength=self.n + 1
        )

    def to_csv(self) -> str:
        buffer = io.StringIO()
        buffer.write("mask,coefficient\n")
        for mask, value in enumerate(self.coeffs.tolist()):
            buffer.write(f"{mask},{value!r}\n")
        return buffer.getvalue()


def spectrum_of(tt: TruthTable) -> Spectrum:
    """
    Fourier coefficients of ``tt`` via the fast Walsh-Hadamard transform.

    The transform runs on the exact +1/-1 values and is scaled once by
    ``2**-n`` at the end.

    Raises:
        CapacityError: If the arity exceeds the configured cap.
    """
    n = check_arity(tt.n)
    coeffs = fwht(tt.signs())
    coeffs *= 2.0**-n
    return Spectrum(n, coeffs)


def coefficient_naive(tt: TruthTable, mask: int) -> float:
    """
    One coefficient by direct summation of ``f(x) * chi_S(x)``.

    Raises:
        DomainError: If ``mask`` is not in ``[0, 2**n)``.
    """
    if not 0 <= mask < tt.size:
        raise DomainError(f"mask {mask} out of range for arity {tt.n}")
    return float(np.dot(tt.signs(), character(tt.n, mask))) / tt.size


def truth_table_of(spec: Spectrum) -> TruthTable:
    """
    Invert ``spectrum_of``: evaluate the Fourier expansion and read signs.

    Raises:
        NotBooleanError: If any reconstructed value is farther than
            ``1e-6`` from +1 or -1.
    """
    values = fwht(np.array(spec.coeffs, dtype=np.float64))
    defect = float(np.max(np.abs(np.abs(values) - 1.0)))
    if defect > BOOLEAN_TOLERANCE:
        raise NotBooleanError(
            f"spectrum reconstructs to non-boolean values "
            f"(max deviation {defect:.3g})"
        )
    return TruthTable.from_bits(spec.n, values < 0)
