from enum import Enum


class Tolerance(Enum):
    COEFFICIENT = 1e-10
    MEASURE = 1e-9
    MOMENT = 1e-12


class KnownTable(Enum):
    MAJORITY_3 = "n=3:8e"
    AND_2 = "n=2:8"
    OR_2 = "n=2:e"
    DICTATOR_1 = "n=1:2"
    SINGLE_POINT_3 = "n=3:10"
    SPLITMIX_SEED_0 = "n=4:fadc"


class SplitMixReference(Enum):
    # SplitMix64 outputs for state 0
    WORD_0 = 0xE220A8397B1DCDAF
    WORD_1 = 0x6E789E6AA1B965F4
    WORD_2 = 0x06C45D188009454F


class KnownRatio(Enum):
    MAJORITY_3 = 4 / 3
    AND_2 = 2.0
    SINGLE_POINT_3 = 2.9558895822516
    EXHAUSTIVE_4 = 3.402475551198587
