"""
Deterministic generators for the function families under study.

Every family is an indexed population: function ``j`` of a family is a
stable identifier across runs. Enumerated families assign one bit to each
class of points (a Hamming weight, a rotation orbit, or a single point)
and read the assignment from the binary digits of ``j``. Sampled families
draw those bits from the SplitMix64 stream of trial ``j``.

Logical TRUE is encoded as -1 for AND, OR and tribes: a coordinate is
TRUE when ``x_i = -1`` and the function outputs -1 when TRUE.
"""

import logging
from abc import ABC, abstractmethod
from collections.abc import Iterator
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from feilab.config import get_settings
from feilab.enums import FamilyKind, NamedKind
from feilab.errors import CapacityError, DomainError
from feilab.prng import MASK64, check_seed, stream_bits, trial_keys
from feilab.spectrum import TruthTable, check_arity, parity, popcounts

logger = logging.getLogger(__name__)

SYMMETRIC_MAX_ARITY = 20
DEFAULT_SCAN_TRIALS = 1000
_INTEGER_KEYS = frozenset(
    ("n", "p", "seed", "trials", "mask", "i", "w", "s", "sign")
)


@dataclass(frozen=True, slots=True)
class FamilySpec:
    """
    Selects a family and its parameters.

    Attributes:
        kind (FamilyKind): random, symmetric, cyclic, named or all.
        n (int): Arity (the prime ``p`` for cyclic families).
        name (NamedKind | None): The function of a named family.
        params (tuple[tuple[str, int], ...]): Named-function parameters
            (mask, i, w, s, sign), sorted by key.
        seed (int | None): Seed of random and sampled cyclic families.
        trials (int | None): Population size of sampled families.
    """

    kind: FamilyKind
    n: int
    name: NamedKind | None = None
    params: tuple[tuple[str, int], ...] = ()
    seed: int | None = None
    trials: int | None = None

    def param(self, key: str, default: int | None = None) -> int | None:
        return dict(self.params).get(key, default)

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        """
        Parse the compact form, e.g. ``"random:n=10,seed=42"``,
        ``"symmetric:n=8"``, ``"cyclic:p=5"``, ``"named:majority,n=9"``,
        ``"named:tribes,w=2,s=3"`` or ``"all:n=3"``.

        Raises:
            DomainError: On unknown kinds, names or keys, missing arity or
                non-integer values.
        """
        head, _, body = text.strip().partition(":")
        try:
            kind = FamilyKind(head)
        except ValueError:
            raise DomainError(f"unknown family kind {head!r}") from None
        items = [item.strip() for item in body.split(",") if item.strip()]
        name = None
        if kind is FamilyKind.NAMED:
            if not items or "=" in items[0]:
                raise DomainError(f"named family needs a name: {text!r}")
            try:
                name = NamedKind(items.pop(0))
            except ValueError:
                raise DomainError(
                    f"unknown named function in {text!r}"
                ) from None
        values: dict[str, int] = {}
        for item in items:
            key, sep, raw = item.partition("=")
            if not sep or key not in _INTEGER_KEYS:
                raise DomainError(f"unexpected parameter {item!r}")
            try:
                values[key] = int(raw)
            except ValueError:
                raise DomainError(
                    f"{key} must be an integer: {raw!r}"
                ) from None
        arity_key = "p" if kind is FamilyKind.CYCLIC_INVARIANT else "n"
        arity = values.pop(arity_key, None)
        if arity is None and name is NamedKind.TRIBES:
            arity = values.get("w", 0) * values.get("s", 0)
        if arity is None:
            raise DomainError(f"family {text!r} does not give its arity")
        seed = values.pop("seed", None)
        trials = values.pop("trials", None)
        return cls(
            kind=kind,
            n=arity,
            name=name,
            params=tuple(sorted(values.items())),
            seed=seed,
            trials=trials,
        )

    def __str__(self) -> str:
        arity_key = "p" if self.kind is FamilyKind.CYCLIC_INVARIANT else "n"
        items = [self.name.value] if self.name is not None else []
        items.append(f"{arity_key}={self.n}")
        items.extend(f"{key}={value}" for key, value in self.params)
        if self.seed is not None:
            items.append(f"seed={self.seed}")
        if self.trials is not None:
            items.append(f"trials={self.trials}")
        return f"{self.kind.value}:" + ",".join(items)


class Family(ABC):
    """An indexed population of truth tables of one arity."""

    n: int

    @property
    @abstractmethod
    def size(self) -> int:
        """Number of functions in the family."""

    @abstractmethod
    def bit_block(self, start: int, stop: int) -> np.ndarray:
        """
        Truth-table bits of functions ``start..stop-1``.

        Returns:
            np.ndarray: ``uint8`` 0/1 array of shape
            ``(stop - start, 2**n)``; 1 means -1.
        """

    def sign_block(self, start: int, stop: int) -> np.ndarray:
        """+1/-1 ``float64`` rows of functions ``start..stop-1``."""
        return 1.0 - 2.0 * self.bit_block(start, stop)

    def table(self, index: int) -> TruthTable:
        if not 0 <= index < self.size:
            raise DomainError(f"index {index} outside family of {self.size}")
        row = self.bit_block(index, index + 1)[0]
        return TruthTable.from_bits(self.n, row)

    def chunks(
        self, chunk_size: int | None = None
    ) -> Iterator[tuple[int, int]]:
        """Consecutive ``(start, stop)`` ranges covering the family."""
        settings = get_settings()
        step = min(
            chunk_size or settings.chunk_size,
            max(1, settings.chunk_points >> self.n),
        )
        for start in range(0, self.size, step):
            yield start, min(start + step, self.size)

    def __iter__(self) -> Iterator[TruthTable]:
        for start, stop in self.chunks():
            packed = np.packbits(
                self.bit_block(start, stop), axis=-1, bitorder="little"
            )
            for row in packed:
                yield TruthTable(self.n, row.tobytes())


class ClassAssignmentFamily(Family):
    """
    Functions constant on each class of a partition of the points.

    Function ``j`` maps every point of class ``c`` to bit ``c`` of ``j``,
    so the family has ``2**classes`` members in binary-counter order.
    """

    def __init__(self, n: int, labels: np.ndarray):
        self.n = n
        self.labels = labels
        self.classes = int(labels.max()) + 1
        if self.classes > 64:
            raise CapacityError(
                f"{self.classes} classes cannot be enumerated by index"
            )

    @property
    def size(self) -> int:
        return 1 << self.classes

    def bit_block(self, start: int, stop: int) -> np.ndarray:
        indices = np.arange(start, stop, dtype=np.uint64)
        shifts = np.arange(self.classes, dtype=np.uint64)
        assignment = (indices[:, None] >> shifts[None, :]) & np.uint64(1)
        bits = assignment.astype(np.uint8)[:, self.labels]
        return np.ascontiguousarray(bits)


class AllFunctions(ClassAssignmentFamily):
    """Every function of arity ``n``; function ``j`` has truth table ``j``."""

    def __init__(self, n: int):
        super().__init__(check_arity(n), np.arange(1 << n))


class SymmetricFamily(ClassAssignmentFamily):
    """Functions of the Hamming weight, one bit per weight ``0..n``."""

    def __init__(self, n: int):
        super().__init__(check_arity(n), popcounts(n))


class CyclicInvariantFamily(ClassAssignmentFamily):
    """Functions invariant under cyclic rotation of ``p`` coordinates."""

    def __init__(self, p: int):
        super().__init__(check_prime(p), cyclic_orbits(p))


class CyclicInvariantSample(Family):
    """Rotation-invariant functions with orbit values drawn per trial."""

    def __init__(self, p: int, seed: int, trials: int):
        self.n = check_prime(p)
        self.labels = cyclic_orbits(p)
        self.classes = int(self.labels.max()) + 1
        self.seed = check_seed(seed)
        self.trials = check_trials(trials)

    @property
    def size(self) -> int:
        return self.trials

    def bit_block(self, start: int, stop: int) -> np.ndarray:
        keys = trial_keys(self.seed, np.arange(start, stop))
        bits = stream_bits(keys, self.classes)[:, self.labels]
        return np.ascontiguousarray(bits)


class RandomFamily(Family):
    """Uniformly random functions, trial ``t`` keyed by ``(seed, t)``."""

    def __init__(self, n: int, seed: int, trials: int):
        self.n = check_arity(n)
        self.seed = check_seed(seed)
        self.trials = check_trials(trials)

    @property
    def size(self) -> int:
        return self.trials

    def bit_block(self, start: int, stop: int) -> np.ndarray:
        keys = trial_keys(self.seed, np.arange(start, stop))
        return stream_bits(keys, 1 << self.n)


class SingleFunction(Family):
    """A family holding one named function."""

    def __init__(self, tt: TruthTable):
        self.n = tt.n
        self._bits = tt.bit_vector()

    @property
    def size(self) -> int:
        return 1

    def bit_block(self, start: int, stop: int) -> np.ndarray:
        return np.tile(self._bits, (stop - start, 1))


def check_trials(trials: int) -> int:
    if not isinstance(trials, int) or trials < 1:
        raise DomainError(f"trials must be a positive integer: {trials!r}")
    return trials


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    divisor = 2
    while divisor * divisor <= p:
        if p % divisor == 0:
            return False
        divisor += 1
    return True


def check_prime(p: int) -> int:
    if not isinstance(p, int) or not is_prime(p):
        raise DomainError(
            f"cyclic-invariant families need a prime arity, got {p!r}"
        )
    return check_arity(p)


def rotate(points: np.ndarray, p: int, steps: int = 1) -> np.ndarray:
    """Rotate the ``p`` coordinates of each point left by ``steps``."""
    steps %= p
    full = (1 << p) - 1
    points = np.asarray(points, dtype=np.int64)
    return ((points << steps) | (points >> (p - steps))) & full


@lru_cache(maxsize=16)
def cyclic_orbits(p: int) -> np.ndarray:
    """
    Orbit label of every point under cyclic rotation.

    Orbits are numbered by their smallest point, so the all-ones input is
    orbit 0 and the all-minus-ones input is the last orbit.
    """
    points = np.arange(1 << check_prime(p), dtype=np.int64)
    smallest = points.copy()
    for steps in range(1, p):
        np.minimum(smallest, rotate(points, p, steps), out=smallest)
    _, labels = np.unique(smallest, return_inverse=True)
    labels = labels.reshape(-1)
    labels.flags.writeable = False
    return labels


class CyclicCount(NamedTuple):
    orbits: int
    size: int


def cyclic_invariant_count(p: int) -> CyclicCount:
    """
    Orbit count ``(2**p - 2) / p + 2`` and family size ``2**orbits``.

    Nothing is materialised, so any prime is accepted.
    """
    if not isinstance(p, int) or not is_prime(p):
        raise DomainError(f"expected a prime arity, got {p!r}")
    orbits = ((1 << p) - 2) // p + 2
    return CyclicCount(orbits=orbits, size=1 << orbits)


def check_budget(size: int, what: str) -> None:
    budget = get_settings().enumeration_budget
    if size > budget:
        raise CapacityError(
            f"{what} has {size} functions, above the enumeration budget "
            f"{budget}; use a sampled or count-only mode"
        )


def random_function(n: int, seed: int, trial: int) -> TruthTable:
    """
    The random function of trial ``trial`` in the run seeded ``seed``.

    Each point independently takes -1 or +1 with probability 1/2; the
    same ``(n, seed, trial)`` always gives the same table.
    """
    check_arity(n)
    if not isinstance(trial, int) or not 0 <= trial <= MASK64:
        raise DomainError(f"trial must be an unsigned 64-bit int: {trial!r}")
    bits = stream_bits(trial_keys(seed, np.array([trial])), 1 << n)
    return TruthTable.from_bits(n, bits[0])


def symmetric_enumerate(n: int) -> Iterator[TruthTable]:
    """
    All ``2**(n + 1)`` symmetric functions of arity ``n``.

    Function ``j`` is -1 on weight ``w`` exactly when bit ``w`` of ``j`` is
    set.

    Raises:
        CapacityError: If ``n`` exceeds 20.
    """
    if n > SYMMETRIC_MAX_ARITY:
        raise CapacityError(
            f"symmetric enumeration is limited to n <= {SYMMETRIC_MAX_ARITY}"
        )
    return iter(SymmetricFamily(n))


def cyclic_invariant_enumerate(p: int) -> Iterator[TruthTable]:
    """
    All rotation-invariant functions of prime arity ``p``.

    Raises:
        DomainError: If ``p`` is not prime.
        CapacityError: If the family exceeds the enumeration budget.
    """
    check_budget(cyclic_invariant_count(p).size, f"cyclic family p={p}")
    return iter(CyclicInvariantFamily(p))


def cyclic_invariant_sample(
    p: int, count: int, seed: int
) -> Iterator[TruthTable]:
    """``count`` rotation-invariant functions with seeded orbit values."""
    return iter(CyclicInvariantSample(p, seed, count))


def _named_bits(spec: FamilySpec) -> np.ndarray:
    n = check_arity(spec.n)
    points = np.arange(1 << n, dtype=np.int64)
    if spec.name is NamedKind.PARITY:
        mask = spec.param("mask", (1 << n) - 1)
        if not 0 <= mask < 1 << n:
            raise DomainError(f"parity mask {mask} out of range")
        return parity(points & mask)
    if spec.name is NamedKind.MAJORITY:
        if n % 2 == 0:
            raise DomainError(f"majority needs an odd arity, got {n}")
        return (popcounts(n) > n // 2).astype(np.uint8)
    if spec.name is NamedKind.DICTATOR:
        i = spec.param("i", 0)
        if not 0 <= i < n:
            raise DomainError(f"dictator index {i} out of range")
        return ((points >> i) & 1).astype(np.uint8)
    if spec.name is NamedKind.CONSTANT:
        sign = spec.param("sign", 1)
        if sign not in (1, -1):
            raise DomainError(f"constant sign must be 1 or -1, got {sign}")
        return np.full(1 << n, sign < 0, dtype=np.uint8)
    if spec.name is NamedKind.AND:
        width, count = n, 1
    elif spec.name is NamedKind.OR:
        width, count = 1, n
    elif spec.name is NamedKind.TRIBES:
        width, count = spec.param("w", 0), spec.param("s", 0)
    else:
        raise DomainError(f"{spec} is not a named function")
    if width < 1 or count < 1 or width * count != n:
        raise DomainError(
            f"tribes needs width * count == n, got {width} * {count} != {n}"
        )
    hit = np.zeros(1 << n, dtype=bool)
    for tribe in range(count):
        block = ((1 << width) - 1) << (tribe * width)
        hit |= (points & block) == block
    return hit.astype(np.uint8)


def named_function(spec: FamilySpec) -> TruthTable:
    """
    Build parity, majority, tribes, AND, OR, dictator or constant.

    Raises:
        DomainError: If ``spec`` is not named or has invalid parameters.
    """
    if spec.kind is not FamilyKind.NAMED:
        raise DomainError(f"{spec} is not a named function")
    return TruthTable.from_bits(spec.n, _named_bits(spec))


def family_of(spec: FamilySpec) -> Family:
    """
    The population a spec selects.

    Random families default to 1000 trials. Cyclic families with a seed
    (or too large to enumerate) are sampled.

    Raises:
        DomainError: On invalid parameters.
    """
    if spec.kind is FamilyKind.NAMED:
        return SingleFunction(named_function(spec))
    if spec.kind is FamilyKind.SYMMETRIC:
        return SymmetricFamily(spec.n)
    if spec.kind is FamilyKind.ALL:
        return AllFunctions(spec.n)
    trials = spec.trials if spec.trials is not None else DEFAULT_SCAN_TRIALS
    if spec.kind is FamilyKind.RANDOM:
        if spec.seed is None:
            raise DomainError("random families need a seed")
        return RandomFamily(spec.n, spec.seed, trials)
    if spec.seed is not None:
        return CyclicInvariantSample(spec.n, spec.seed, trials)
    count = cyclic_invariant_count(spec.n)
    check_budget(count.size, f"cyclic family p={spec.n}")
    logger.debug("cyclic family p=%d has %d orbits", spec.n, count.orbits)
    return CyclicInvariantFamily(spec.n)
