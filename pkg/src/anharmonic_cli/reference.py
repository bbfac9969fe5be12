"""Published reference values for the cubic oscillator ``V = r^2 + g r^3``.

All numbers are copied as printed (units hbar = 1, M = 1/2). Energies are keyed
by ``(D, g)``; strong-coupling coefficients by D.
"""

from typing import Literal

from pydantic import BaseModel, ConfigDict

from anharmonic_cli.core import StateLabel

TableName = Literal["I", "II", "III", "IV", "V", "VI", "VII", "VIII"]

TABLE_NAMES: tuple[TableName, ...] = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII")
DIMENSIONS = (1, 2, 3, 6)
COUPLINGS = (0.1, 1.0, 10.0)

REFERENCE_VERSION = "1"


class EnergyCell(BaseModel):
    """``E_var``, ``-E_2`` and ``E_var + E_2`` of one (D, g) cell."""

    model_config = ConfigDict(frozen=True)

    e_var: float
    minus_e2: float | None = None
    e_corrected: float | None = None


class NodalCell(BaseModel):
    model_config = ConfigDict(frozen=True)

    e_var: float
    node: float


class LeadingCell(BaseModel):
    model_config = ConfigDict(frozen=True)

    variational: float
    minus_correction: float
    corrected: float


class SubleadingCell(BaseModel):
    model_config = ConfigDict(frozen=True)

    first: float
    correction: float
    refined: float


class FitCell(BaseModel):
    model_config = ConfigDict(frozen=True)

    a: float
    b: float


Key = tuple[int, float]

# ground state (0, 0)
TABLE_I: dict[Key, EnergyCell] = {
    (1, 0.1): EnergyCell(e_var=1.053120300, minus_e2=5.39e-7, e_corrected=1.053119761),
    (1, 1.0): EnergyCell(e_var=1.387428891, minus_e2=4.00e-8, e_corrected=1.387428851),
    (1, 10.0): EnergyCell(e_var=2.729533139, minus_e2=6.56e-7, e_corrected=2.729532483),
    (2, 0.1): EnergyCell(e_var=2.124027648, minus_e2=4.40e-7, e_corrected=2.124027208),
    (2, 1.0): EnergyCell(e_var=2.877490906, minus_e2=3.76e-8, e_corrected=2.877490868),
    (2, 10.0): EnergyCell(e_var=5.794213459, minus_e2=5.58e-7, e_corrected=5.794212901),
    (3, 0.1): EnergyCell(e_var=3.208922743, minus_e2=4.00e-7, e_corrected=3.208922343),
    (3, 1.0): EnergyCell(e_var=4.442965260, minus_e2=3.15e-8, e_corrected=4.442965229),
    (3, 10.0): EnergyCell(e_var=9.094985589, minus_e2=4.23e-7, e_corrected=9.094985166),
    (6, 0.1): EnergyCell(e_var=6.528432540, minus_e2=2.02e-7, e_corrected=6.528432338),
    (6, 1.0): EnergyCell(e_var=9.465319951, minus_e2=1.85e-8, e_corrected=9.465319933),
    (6, 10.0): EnergyCell(e_var=19.981458504, minus_e2=1.96e-7, e_corrected=19.981458308),
}

# first excited state: n = 1 for D = 1, (0, 1) otherwise
TABLE_II: dict[Key, EnergyCell] = {
    (1, 0.1): EnergyCell(e_var=3.208922765, minus_e2=4.21e-7, e_corrected=3.208922343),
    (1, 1.0): EnergyCell(e_var=4.442965265, minus_e2=3.59e-8, e_corrected=4.442965229),
    (1, 10.0): EnergyCell(e_var=9.094985630, minus_e2=4.64e-7, e_corrected=9.094985166),
    (2, 0.1): EnergyCell(e_var=4.305557665, minus_e2=3.55e-7, e_corrected=4.305557309),
    (2, 1.0): EnergyCell(e_var=6.068723537, minus_e2=2.92e-8, e_corrected=6.068723507),
    (2, 10.0): EnergyCell(e_var=12.579594377, minus_e2=3.48e-7, e_corrected=12.579594029),
    (3, 0.1): EnergyCell(e_var=5.412425220, minus_e2=2.86e-7, e_corrected=5.412424933),
    (3, 1.0): EnergyCell(e_var=7.745092165, minus_e2=2.41e-8, e_corrected=7.745092141),
    (3, 10.0): EnergyCell(e_var=16.215748127, minus_e2=2.66e-7, e_corrected=16.215747861),
    (6, 0.1): EnergyCell(e_var=8.784695351, minus_e2=1.21e-7, e_corrected=8.784695230),
    (6, 1.0): EnergyCell(e_var=13.018486318, minus_e2=1.49e-8, e_corrected=13.018486303),
    (6, 10.0): EnergyCell(e_var=27.841430199, minus_e2=1.37e-7, e_corrected=27.841430061),
}

# second excited state: n = 2 for D = 1 (variational only), (0, 2) otherwise
TABLE_III: dict[Key, EnergyCell] = {
    (1, 0.1): EnergyCell(e_var=5.436849553),
    (1, 1.0): EnergyCell(e_var=7.879141644),
    (1, 10.0): EnergyCell(e_var=16.641305904),
    (2, 0.1): EnergyCell(e_var=6.528432582, minus_e2=2.43e-7, e_corrected=6.52843233834),
    (2, 1.0): EnergyCell(e_var=9.465319955, minus_e2=2.21e-8, e_corrected=9.46531993256),
    (2, 10.0): EnergyCell(e_var=19.981458531, minus_e2=2.23e-7, e_corrected=19.98145830814),
    (3, 0.1): EnergyCell(e_var=7.652743974, minus_e2=1.87e-7, e_corrected=7.652743787),
    (3, 1.0): EnergyCell(e_var=11.224406591, minus_e2=1.87e-8, e_corrected=11.224406573),
    (3, 10.0): EnergyCell(e_var=23.860743313, minus_e2=1.78e-7, e_corrected=23.860743135),
    (6, 0.1): EnergyCell(e_var=11.069434802, minus_e2=6.73e-8, e_corrected=11.069434735),
    (6, 1.0): EnergyCell(e_var=16.699837135, minus_e2=1.22e-8, e_corrected=16.699837123),
    (6, 10.0): EnergyCell(e_var=36.070426676, minus_e2=1.01e-7, e_corrected=36.070426576),
}

# (1, 0): variational energy and the node of P(r^2)
TABLE_IV: dict[Key, NodalCell] = {
    (2, 0.1): NodalCell(e_var=6.570942086, node=0.953377788),
    (2, 1.0): NodalCell(e_var=9.690374810, node=0.780305457),
    (2, 10.0): NodalCell(e_var=20.681623429, node=0.532055331),
    (3, 0.1): NodalCell(e_var=7.709696613, node=1.162457356),
    (3, 1.0): NodalCell(e_var=11.517370500, node=0.941956538),
    (3, 10.0): NodalCell(e_var=24.758598615, node=0.638726047),
    (6, 0.1): NodalCell(e_var=11.15814973, node=1.626236134),
    (6, 1.0): NodalCell(e_var=17.128462944, node=1.289494458),
    (6, 10.0): NodalCell(e_var=37.346045552, node=0.865045854),
}

# D = 1 partial sums of eps~_0 about exp(-(2/5) w^(5/2)), K = 0 ... 6
TABLE_V: tuple[float, ...] = (
    0.0,
    1.053006976,
    1.021174929,
    1.022989568,
    1.022956899,
    1.022946414,
    1.022947763,
)
TABLE_V_EXACT = 1.022947875

# eps~_0: Approximant on W = r^3
TABLE_VI: dict[int, LeadingCell] = {
    1: LeadingCell(variational=1.022948250, minus_correction=3.75e-7, corrected=1.022947875),
    2: LeadingCell(variational=2.187461809, minus_correction=3.09e-7, corrected=2.187461499),
    3: LeadingCell(variational=3.450562918, minus_correction=2.29e-7, corrected=3.450562689),
    6: LeadingCell(variational=7.647118254, minus_correction=1.01e-7, corrected=7.647118153),
}

# eps~_1: <w^2> about the optimal Approximant and its correction
TABLE_VII: dict[int, SubleadingCell] = {
    1: SubleadingCell(first=0.410598524, correction=6.78e-7, refined=0.410599202),
    2: SubleadingCell(first=0.766573847, correction=5.24e-7, refined=0.766574371),
    3: SubleadingCell(first=1.092125224, correction=2.67e-7, refined=1.092125491),
    6: SubleadingCell(first=1.967599668, correction=1.42e-7, refined=1.967599810),
}

# E = D (1 + a g + b^5 g^2)^(1/5)
TABLE_VIII: dict[int, FitCell] = {
    1: FitCell(a=3.281, b=1.023),
    2: FitCell(a=3.922, b=1.094),
    3: FitCell(a=4.823, b=1.150),
    6: FitCell(a=5.994, b=1.275),
}
FIT_ACCURACY = 0.02

CRUDE_EPSILON1 = 0.495
SIMPLE_CORRECTED_EPSILON1 = 0.409


def table_state(table: TableName, dimension: int) -> StateLabel:
    """The state a spectrum table lists for dimension D."""
    if table == "I":
        return StateLabel()

    if table == "IV":
        return StateLabel(radial_quantum_number=1)

    excitation = {"II": 1, "III": 2}[table]
    if dimension == 1:
        return StateLabel(radial_quantum_number=excitation)

    return StateLabel(angular_momentum=excitation)


SPECTRUM_TABLES: dict[TableName, dict[Key, EnergyCell]] = {
    "I": TABLE_I,
    "II": TABLE_II,
    "III": TABLE_III,
}
