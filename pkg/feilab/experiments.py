"""
Experiments over populations of functions.

A population is cut into fixed-size chunks (``Settings.chunk_size``).
Each chunk is transformed as one batch and summarised into a
``ChunkSummary``; summaries are reduced in chunk order. Worker threads
only change which thread computes a chunk, never the chunk boundaries or
the reduction order, so records do not depend on ``workers``.

Influence sums are shifted by the expected influence ``n / 2`` before
squaring. Over all functions every influence is a dyadic rational, so
exhaustive moments are exact in double precision.
"""

import json
import logging
import math
import time
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, TypeVar

import numpy as np

from feilab.__about__ import __version__
from feilab.config import get_settings
from feilab.errors import CapacityError, DomainError
from feilab.families import (
    AllFunctions,
    Family,
    FamilySpec,
    RandomFamily,
    check_budget,
    family_of,
)
from feilab.measures import (
    CONSTANT_INFLUENCE,
    SATISFACTION_SLACK,
    check_constant,
    row_entropy,
    row_influence,
)
from feilab.spectrum import check_arity, fwht, popcounts

logger = logging.getLogger(__name__)

BINS_PER_UNIT = 10

T = TypeVar("T")


def chebyshev_bound(n: int, epsilon: float) -> float:
    """
    ``4 (1 + 1/eps)**2 / (2**(n+1) n)``, the tail bound on
    ``Pr[H > (2 + 2 eps) Inf]`` for a uniformly random function.

    Not capped at 1.

    Raises:
        DomainError: If ``n < 1`` or ``epsilon <= 0``.
    """
    if not epsilon > 0:
        raise DomainError(f"epsilon must be positive, got {epsilon!r}")
    return _tail(n, 1.0 / epsilon)


def fraction_bound(n: int, delta: float) -> float:
    """
    ``1 - 4 (1 + 2/delta)**2 / (2**(n+1) n)``: the guaranteed fraction of
    all functions satisfying the inequality with ``C = 2 + delta``.

    ``fraction_bound(n, 2 * eps) == 1 - chebyshev_bound(n, eps)``.

    Raises:
        DomainError: If ``n < 1`` or ``delta <= 0``.
    """
    if not delta > 0:
        raise DomainError(f"delta must be positive, got {delta!r}")
    return 1.0 - _tail(n, 2.0 / delta)


def satisfying_count_bound(n: int, delta: float) -> float:
    """``fraction_bound(n, delta) * 2**(2**n)``; infinite from n = 11."""
    fraction = fraction_bound(n, delta)
    try:
        return math.ldexp(fraction, 1 << n)
    except OverflowError:
        return math.copysign(math.inf, fraction)


def _tail(n: int, inverse: float) -> float:
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"arity must be a positive integer, got {n!r}")
    return 4.0 * (1.0 + inverse) ** 2 / (2.0 ** (n + 1) * n)


def fourth_moment_formula(n: int, equal: bool) -> float:
    """Closed form of ``E[f(S1)**2 f(S2)**2]`` over all functions."""
    lead = 3 if equal else 1
    return (lead * 4**n - 2 * 2**n) / 16**n


@dataclass(frozen=True, slots=True)
class HistogramBin:
    bin_low: float
    bin_high: float
    count: int


def histogram_bins(n: int) -> int:
    return BINS_PER_UNIT * n


def ratio_histogram(ratios: np.ndarray, n: int) -> np.ndarray:
    """
    Counts of ratios in bins ``[k/10, (k+1)/10)`` over ``[0, n]``.

    Ratios at or above ``n`` land in the last bin.
    """
    bins = histogram_bins(n)
    index = np.floor(np.asarray(ratios) * BINS_PER_UNIT + 1e-9)
    index = np.clip(index, 0, bins - 1).astype(np.int64)
    return np.bincount(index, minlength=bins)


def histogram_rows(counts: np.ndarray) -> tuple[HistogramBin, ...]:
    return tuple(
        HistogramBin(k / BINS_PER_UNIT, (k + 1) / BINS_PER_UNIT, int(count))
        for k, count in enumerate(counts.tolist())
    )


@dataclass(frozen=True, slots=True)
class ExperimentRecord:
    """
    Parameters, statistics and theoretical bounds of one run.

    ``runtime_ms`` is always measured; ``to_dict`` leaves it out (as null)
    unless asked, so identical runs serialise identically.
    """

    experiment: str
    params: dict[str, Any]
    stats: dict[str, Any]
    bounds: dict[str, float]
    histogram: tuple[HistogramBin, ...] | None = None
    runtime_ms: float | None = None
    version: str = __version__

    def to_dict(self, timing: bool = False) -> dict[str, Any]:
        return {
            "experiment": self.experiment,
            "version": self.version,
            "params": dict(self.params),
            "stats": dict(self.stats),
            "bounds": dict(self.bounds),
            "histogram": (
                None
                if self.histogram is None
                else [
                    {
                        "bin_low": row.bin_low,
                        "bin_high": row.bin_high,
                        "count": row.count,
                    }
                    for row in self.histogram
                ]
            ),
            "runtime_ms": self.runtime_ms if timing else None,
        }

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), indent=2) + "\n"

    def histogram_csv(self) -> str:
        if self.histogram is None:
            raise DomainError(f"{self.experiment} records no histogram")
        lines = ["bin_low,bin_high,count"]
        lines.extend(
            f"{row.bin_low!r},{row.bin_high!r},{row.count}"
            for row in self.histogram
        )
        return "\n".join(lines) + "\n"


@dataclass(slots=True)
class ChunkSummary:
    """Reducible statistics of one chunk of a population."""

    start: int
    count: int
    influence_sum: float
    influence_sq_sum: float
    entropy_sum: float
    max_entropy: float
    max_ratio: float | None
    argmax: int | None
    constant_count: int
    violations: int
    histogram: np.ndarray = field(repr=False)


def _transform(family: Family, start: int, stop: int) -> np.ndarray:
    coeffs = fwht(family.sign_block(start, stop))
    coeffs *= 2.0**-family.n
    return coeffs


def _summarise(
    family: Family, start: int, stop: int, c: float
) -> ChunkSummary:
    n = family.n
    coeffs = _transform(family, start, stop)
    entropies = row_entropy(coeffs)
    influences = row_influence(coeffs, n)
    shifted = influences - n / 2
    varying = influences > CONSTANT_INFLUENCE
    ratios = entropies[varying] / influences[varying]
    max_ratio, argmax = None, None
    if ratios.size:
        best = int(np.argmax(ratios))
        max_ratio = float(ratios[best])
        argmax = start + int(np.flatnonzero(varying)[best])
    logger.debug("summarised functions %d..%d", start, stop - 1)
    return ChunkSummary(
        start=start,
        count=stop - start,
        influence_sum=float(np.sum(shifted)),
        influence_sq_sum=float(np.sum(shifted * shifted)),
        entropy_sum=float(np.sum(entropies)),
        max_entropy=float(np.max(entropies)),
        max_ratio=max_ratio,
        argmax=argmax,
        constant_count=int(np.count_nonzero(~varying)),
        violations=int(
            np.count_nonzero(entropies > c * influences + SATISFACTION_SLACK)
        ),
        histogram=ratio_histogram(ratios, n),
    )


def _map_chunks(
    family: Family, work: Callable[[int, int], T], workers: int | None
) -> list[T]:
    settings = get_settings()
    ranges = list(family.chunks(settings.chunk_size))
    workers = workers or settings.workers
    if workers == 1 or len(ranges) == 1:
        return [work(start, stop) for start, stop in ranges]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda bounds: work(*bounds), ranges))


@dataclass(frozen=True, slots=True)
class PopulationSummary:
    """A population's statistics after reducing every chunk in order."""

    n: int
    count: int
    influence_sum: float
    influence_sq_sum: float
    entropy_sum: float
    max_entropy: float
    max_ratio: float | None
    argmax: int | None
    constant_count: int
    violations: int
    histogram: np.ndarray

    @property
    def mean_influence(self) -> float:
        return self.n / 2 + self.influence_sum / self.count

    def population_variance(self) -> float:
        centred = self.influence_sum / self.count
        return self.influence_sq_sum / self.count - centred * centred

    def sample_variance(self) -> float | None:
        if self.count < 2:
            return None
        spread = self.influence_sum * self.influence_sum / self.count
        return (self.influence_sq_sum - spread) / (self.count - 1)

    def mean_influence_sq(self) -> float:
        shift = self.n / 2
        return (
            self.influence_sq_sum / self.count
            + 2 * shift * self.influence_sum / self.count
            + shift * shift
        )

    @property
    def mean_entropy(self) -> float:
        return self.entropy_sum / self.count

    @property
    def violation_fraction(self) -> float:
        return self.violations / self.count

    def extremes(self) -> dict[str, Any]:
        return {
            "max_entropy": self.max_entropy,
            "max_ratio": self.max_ratio,
            "argmax_id": self.argmax,
            "constant_count": self.constant_count,
            "violation_count": self.violations,
            "violation_fraction": self.violation_fraction,
        }


def _reduce(n: int, parts: Sequence[ChunkSummary]) -> PopulationSummary:
    max_ratio, argmax = None, None
    for part in parts:
        if part.max_ratio is not None and (
            max_ratio is None or part.max_ratio > max_ratio
        ):
            max_ratio, argmax = part.max_ratio, part.argmax
    return PopulationSummary(
        n=n,
        count=sum(part.count for part in parts),
        influence_sum=float(np.sum([p.influence_sum for p in parts])),
        influence_sq_sum=float(np.sum([p.influence_sq_sum for p in parts])),
        entropy_sum=float(np.sum([p.entropy_sum for p in parts])),
        max_entropy=max(part.max_entropy for part in parts),
        max_ratio=max_ratio,
        argmax=argmax,
        constant_count=sum(part.constant_count for part in parts),
        violations=sum(part.violations for part in parts),
        histogram=np.sum([part.histogram for part in parts], axis=0),
    )


def summarise_population(
    family: Family, c: float, workers: int | None = None
) -> PopulationSummary:
    """
    Entropy, influence and ratio statistics of every function in a family.

    Args:
        family (Family): The population.
        c (float): Constant of the violation count ``H > C * Inf``.
        workers (int | None): Threads; defaults to ``Settings.workers``.
    """
    def work(start: int, stop: int) -> ChunkSummary:
        return _summarise(family, start, stop, c)

    return _reduce(family.n, _map_chunks(family, work, workers))


def _elapsed_ms(started: float) -> float:
    return (time.perf_counter() - started) * 1000.0


def _check_exhaustive(n: int) -> int:
    cap = get_settings().exhaustive_cap
    if n > cap:
        raise CapacityError(
            f"exhaustive enumeration is limited to n <= {cap} "
            f"(2**(2**{n}) functions requested); use monte_carlo"
        )
    return check_arity(n)


def exhaustive_stats(
    n: int, epsilon: float, workers: int | None = None
) -> ExperimentRecord:
    """
    Exact influence moments and violation counts over all functions.

    Every one of the ``2**(2**n)`` functions is transformed once, so the
    mean is the exact ``E[Inf]`` of a uniformly random function, the
    population variance its exact variance, and ``violation_count`` the
    exact number of functions with ``H > (2 + 2 eps) Inf``.

    Raises:
        CapacityError: If ``n`` exceeds the exhaustive cap (4 by default).
        DomainError: If ``epsilon <= 0``.
    """
    bound = chebyshev_bound(n, epsilon)
    _check_exhaustive(n)
    started = time.perf_counter()
    logger.info("exhaustive n=%d epsilon=%g", n, epsilon)
    c = 2.0 + 2.0 * epsilon
    summary = summarise_population(AllFunctions(n), c, workers)
    stats = {
        "population": summary.count,
        "mean_influence": summary.mean_influence,
        "var_influence": summary.population_variance(),
        "mean_influence_sq": summary.mean_influence_sq(),
        "mean_entropy": summary.mean_entropy,
        **summary.extremes(),
        "satisfying_count": summary.count - summary.violations,
    }
    record = ExperimentRecord(
        experiment="exhaustive",
        params={"n": n, "epsilon": epsilon, "delta": 2.0 * epsilon},
        stats=stats,
        bounds={
            "mean_influence": n / 2,
            "var_influence": n / 2 ** (n + 1),
            "mean_influence_sq": n / 2 ** (n + 1) + n * n / 4,
            "chebyshev_bound": bound,
            "fraction_bound": fraction_bound(n, 2.0 * epsilon),
            "satisfying_count_bound": satisfying_count_bound(
                n, 2.0 * epsilon
            ),
        },
        runtime_ms=_elapsed_ms(started),
    )
    logger.info("exhaustive n=%d done in %.1f ms", n, record.runtime_ms)
    return record


@dataclass(frozen=True, slots=True)
class FourthMomentRow:
    s1: int
    s2: int
    enumerated: float
    formula: float
    abs_diff: float


@dataclass(frozen=True, slots=True)
class FourthMomentTable:
    """Enumerated against closed-form ``E[f(S1)**2 f(S2)**2]``."""

    n: int
    rows: tuple[FourthMomentRow, ...]
    second_moment: float
    second_moment_formula: float
    version: str = __version__

    @property
    def max_abs_diff(self) -> float:
        return max(row.abs_diff for row in self.rows)

    def to_dict(self) -> dict[str, Any]:
        return {
            "experiment": "fourth_moments",
            "version": self.version,
            "params": {"n": self.n},
            "rows": [
                {
                    "s1": row.s1,
                    "s2": row.s2,
                    "enumerated": row.enumerated,
                    "formula": row.formula,
                    "abs_diff": row.abs_diff,
                }
                for row in self.rows
            ],
            "max_abs_diff": self.max_abs_diff,
            "second_moment": self.second_moment,
            "second_moment_formula": self.second_moment_formula,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def fourth_moment_table(
    n: int, workers: int | None = None
) -> FourthMomentTable:
    """
    ``E[f(S1)**2 f(S2)**2]`` for every mask pair, over all functions.

    The enumerated matrix also yields ``E[Inf**2]`` as
    ``sum E[f(S1)**2 f(S2)**2] |S1| |S2|``.

    Raises:
        CapacityError: If ``n`` exceeds the exhaustive cap.
    """
    _check_exhaustive(n)
    family = AllFunctions(n)
    logger.info("fourth moments n=%d", n)

    def gram(start: int, stop: int) -> np.ndarray:
        weights = np.square(_transform(family, start, stop))
        return weights.T @ weights

    moments = np.sum(_map_chunks(family, gram, workers), axis=0)
    moments /= family.size
    sizes = popcounts(n).astype(np.float64)
    rows = []
    for s1 in range(1 << n):
        for s2 in range(1 << n):
            enumerated = float(moments[s1, s2])
            formula = fourth_moment_formula(n, s1 == s2)
            rows.append(
                FourthMomentRow(
                    s1, s2, enumerated, formula, abs(enumerated - formula)
                )
            )
    return FourthMomentTable(
        n=n,
        rows=tuple(rows),
        second_moment=float(sizes @ moments @ sizes),
        second_moment_formula=n / 2 ** (n + 1) + n * n / 4,
    )


def monte_carlo(
    n: int,
    trials: int,
    seed: int,
    epsilon: float,
    workers: int | None = None,
) -> ExperimentRecord:
    """
    Sampled moments of influence and entropy of random functions.

    Trial ``t`` analyses ``random_function(n, seed, t)``. The variance is
    the unbiased sample variance; ``mean_entropy`` is empirical only.
    ``violation_fraction`` estimates ``Pr[H > (2 + 2 eps) Inf]``, which
    ``chebyshev_bound(n, eps)`` bounds from above.

    Raises:
        CapacityError: If ``n`` exceeds the arity cap.
        DomainError: If ``epsilon <= 0``, ``trials < 1`` or the seed is
            not an unsigned 64-bit integer.
    """
    bound = chebyshev_bound(n, epsilon)
    family = RandomFamily(n, seed, trials)
    started = time.perf_counter()
    logger.info(
        "monte carlo n=%d trials=%d seed=%d epsilon=%g",
        n,
        trials,
        seed,
        epsilon,
    )
    summary = summarise_population(family, 2.0 + 2.0 * epsilon, workers)
    record = ExperimentRecord(
        experiment="montecarlo",
        params={
            "n": n,
            "seed": seed,
            "trials": trials,
            "epsilon": epsilon,
            "delta": 2.0 * epsilon,
        },
        stats={
            "mean_influence": summary.mean_influence,
            "var_influence": summary.sample_variance(),
            "mean_entropy": summary.mean_entropy,
            **summary.extremes(),
        },
        bounds={
            "mean_influence": n / 2,
            "var_influence": n / 2 ** (n + 1),
            "chebyshev_bound": bound,
            "fraction_bound": fraction_bound(n, 2.0 * epsilon),
        },
        runtime_ms=_elapsed_ms(started),
    )
    logger.info("monte carlo n=%d done in %.1f ms", n, record.runtime_ms)
    return record


def family_scan(
    family: FamilySpec | str, c: float, workers: int | None = None
) -> ExperimentRecord:
    """
    Scan a family for its largest entropy/influence ratio.

    ``argmax_id`` is the first index reaching ``max_ratio`` in the family's
    order; the histogram bins the ratios of non-constant functions.

    Raises:
        CapacityError: If the family exceeds the enumeration budget.
        DomainError: On invalid family parameters or ``c <= 0``.
    """
    spec = FamilySpec.parse(family) if isinstance(family, str) else family
    c = check_constant(c)
    population = family_of(spec)
    check_budget(population.size, str(spec))
    started = time.perf_counter()
    logger.info("scan %s c=%g over %d functions", spec, c, population.size)
    summary = summarise_population(population, c, workers)
    record = ExperimentRecord(
        experiment="scan",
        params={"family": str(spec), "n": spec.n, "c": c},
        stats={
            "population": summary.count,
            "mean_influence": summary.mean_influence,
            "mean_entropy": summary.mean_entropy,
            **summary.extremes(),
        },
        bounds={"max_entropy": float(spec.n)},
        histogram=histogram_rows(summary.histogram),
        runtime_ms=_elapsed_ms(started),
    )
    if summary.violations:
        logger.info(
            "scan %s: %d functions exceed C=%g",
            spec,
            summary.violations,
            c,
        )
    return record
