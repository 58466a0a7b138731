# SPDX-FileCopyrightText: 2025-present PyBackDev <evbalbukova@gmail.com>
#
# SPDX-License-Identifier: MIT

from .experiments import (
    ExperimentRecord,
    chebyshev_bound,
    exhaustive_stats,
    family_scan,
    fourth_moment_table,
    fraction_bound,
    monte_carlo,
)
from .families import (
    FamilySpec,
    cyclic_invariant_count,
    cyclic_invariant_enumerate,
    cyclic_invariant_sample,
    named_function,
    random_function,
    symmetric_enumerate,
)
from .measures import (
    FeiReport,
    entropy,
    fei_report,
    influence_combinatorial,
    influence_coord,
    influence_total,
)
from .spectrum import (
    Spectrum,
    TruthTable,
    coefficient_naive,
    spectrum_of,
    truth_table_of,
)

__all__ = (
    "ExperimentRecord",
    "FamilySpec",
    "FeiReport",
    "Spectrum",
    "TruthTable",
    "chebyshev_bound",
    "coefficient_naive",
    "cyclic_invariant_count",
    "cyclic_invariant_enumerate",
    "cyclic_invariant_sample",
    "entropy",
    "exhaustive_stats",
    "family_scan",
    "fei_report",
    "fourth_moment_table",
    "fraction_bound",
    "influence_combinatorial",
    "influence_coord",
    "influence_total",
    "monte_carlo",
    "named_function",
    "random_function",
    "spectrum_of",
    "symmetric_enumerate",
    "truth_table_of",
)
