from .bloch import (
    CRecurrences,
    GeneratingFunctionTable,
    LinearInD,
    c2_closed_form,
    c_recurrences,
    gb_strong_corrections,
    gb_weak_corrections,
    strong_small_u_series,
)
from .phases import PhaseValues, semiclassical_phases
from .rational import RationalSeries
from .riccati import (
    DescendingSeries,
    correction_expansions,
    rb_large_v_series,
    rb_small_v_series,
)

__all__ = [
    "CRecurrences",
    "DescendingSeries",
    "GeneratingFunctionTable",
    "LinearInD",
    "PhaseValues",
    "RationalSeries",
    "c2_closed_form",
    "c_recurrences",
    "correction_expansions",
    "gb_strong_corrections",
    "gb_weak_corrections",
    "rb_large_v_series",
    "rb_small_v_series",
    "semiclassical_phases",
    "strong_small_u_series",
]
