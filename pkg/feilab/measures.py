"""Spectral entropy, influence and the entropy/influence ratio."""

import math
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from feilab.errors import DomainError, InvalidSpectrumError
from feilab.spectrum import Spectrum, TruthTable, popcounts, spectrum_of

ENTROPY_PARSEVAL_TOLERANCE = 1e-6
CONSTANT_INFLUENCE = 1e-12
SATISFACTION_SLACK = 1e-9


def row_entropy(coeffs: np.ndarray) -> np.ndarray:
    """
    Base-2 entropy of the squared coefficients along the last axis.

    Zero weights contribute nothing, i.e. ``0 * log2(1 / 0) = 0``.
    """
    weights = np.square(coeffs)
    logs = np.log2(np.where(weights > 0.0, weights, 1.0))
    return 0.0 - np.sum(weights * logs, axis=-1)


def row_influence(coeffs: np.ndarray, n: int) -> np.ndarray:
    """Total influence ``sum_S c_S**2 * |S|`` along the last axis."""
    return np.sum(np.square(coeffs) * popcounts(n), axis=-1)


def check_coordinate(n: int, i: int) -> int:
    if not 0 <= i < n:
        raise DomainError(f"coordinate {i} out of range for arity {n}")
    return i


def entropy(spec: Spectrum) -> float:
    """
    Spectral entropy ``H(f)`` in bits.

    Raises:
        InvalidSpectrumError: If the squared coefficients do not sum to 1
            within ``1e-6``.
    """
    defect = spec.parseval_defect()
    if defect > ENTROPY_PARSEVAL_TOLERANCE:
        raise InvalidSpectrumError(
            f"squared coefficients sum to 1 {defect:+.3g}, "
            "entropy is undefined"
        )
    return float(row_entropy(spec.coeffs))


def influence_total(spec: Spectrum) -> float:
    return float(row_influence(spec.coeffs, spec.n))


def influence_coord(spec: Spectrum, i: int) -> float:
    """
    Influence of coordinate ``i``: the weight on masks containing ``i``.

    Raises:
        DomainError: If ``i`` is not in ``[0, n)``.
    """
    check_coordinate(spec.n, i)
    pairs = spec.weights().reshape(-1, 2, 1 << i)
    return float(np.sum(pairs[:, 1, :]))


def influence_vector(spec: Spectrum) -> tuple[float, ...]:
    return tuple(influence_coord(spec, i) for i in range(spec.n))


def influence_combinatorial(tt: TruthTable, i: int) -> float:
    """
    ``Pr_x[f(x) != f(x with coordinate i flipped)]`` by counting.

    Raises:
        DomainError: If ``i`` is not in ``[0, n)``.
    """
    check_coordinate(tt.n, i)
    pairs = tt.bit_vector().reshape(-1, 2, 1 << i)
    pivotal = np.count_nonzero(pairs[:, 0, :] != pairs[:, 1, :])
    return 2.0 * pivotal / tt.size


@dataclass(frozen=True, slots=True)
class FeiReport:
    """
    Entropy and influence of one function checked against a constant.

    ``ratio`` is ``None`` for constant functions, where the inequality
    holds with both sides zero.
    """

    n: int
    entropy: float
    influence_total: float
    influence_per_coord: tuple[float, ...]
    ratio: float | None
    constant_c: float
    satisfies: bool

    def to_dict(self) -> dict[str, Any]:
        document = asdict(self)
        document["influence_per_coord"] = list(self.influence_per_coord)
        return document


def check_constant(c: float) -> float:
    if not (isinstance(c, (int, float)) and c > 0 and math.isfinite(c)):
        raise DomainError(f"constant C must be a positive number, got {c!r}")
    return float(c)


def satisfies(h: float, inf: float, c: float) -> bool:
    """``H <= C * Inf``, boundary cases counted as satisfying."""
    return h <= c * inf + SATISFACTION_SLACK


def fei_report(tt: TruthTable, c: float) -> FeiReport:
    """
    Analyse one function.

    Args:
        tt (TruthTable): The function.
        c (float): The constant ``C`` under test, ``C > 0``.

    Returns:
        FeiReport: Every measure plus the verdict ``H <= C * Inf``.

    Raises:
        DomainError: If ``c`` is not positive.
        CapacityError: If the arity exceeds the configured cap.
    """
    c = check_constant(c)
    spec = spectrum_of(tt)
    h = entropy(spec)
    total = influence_total(spec)
    return FeiReport(
        n=tt.n,
        entropy=h,
        influence_total=total,
        influence_per_coord=influence_vector(spec),
        ratio=None if total <= CONSTANT_INFLUENCE else h / total,
        constant_c=c,
        satisfies=satisfies(h, total, c),
    )
