"""The purpose of this file is to provide the 15-component observable
vector used as the state of the block equations.

The component order is frozen: it is the column order of every trajectory
CSV file written by this package.
"""

from dataclasses import astuple, dataclass, fields
from typing import Dict, List, Mapping, Tuple

import numpy as np

OBSERVABLE_NAMES: Tuple[str, ...] = (
    "Mz",
    "Mzz",
    "Mc",
    "Mx",
    "My",
    "Mxy",
    "Mxz",
    "Myz",
    "Ax",
    "Ay",
    "Az",
    "Axy",
    "Axz",
    "Ayz",
    "Ac",
)

# Decoupled blocks of the equations of motion, as indices into
# OBSERVABLE_NAMES. Block 1 is the only one with an inhomogeneity.
BLOCK_NAMES: Dict[int, Tuple[str, ...]] = {
    1: ("Mz", "Mzz", "Mc"),
    2: ("Mx", "My", "Mxz", "Myz"),
    3: ("Mxy", "Ac"),
    4: ("Axy", "Az"),
    5: ("Ax", "Ay", "Axz", "Ayz"),
}
BLOCK_INDICES: Dict[int, Tuple[int, ...]] = {
    block: tuple(OBSERVABLE_NAMES.index(name) for name in names)
    for block, names in BLOCK_NAMES.items()
}


@dataclass(frozen=True)
class ObservableVector:
    """Expectation values of the symmetric (M) and antisymmetric (A)
    one- and two-spin observables of a qubit pair.

    Mc = Mxx + Myy and Ac = Mxx - Myy.
    """

    Mz: float = 0.0
    Mzz: float = 0.0
    Mc: float = 0.0
    Mx: float = 0.0
    My: float = 0.0
    Mxy: float = 0.0
    Mxz: float = 0.0
    Myz: float = 0.0
    Ax: float = 0.0
    Ay: float = 0.0
    Az: float = 0.0
    Axy: float = 0.0
    Axz: float = 0.0
    Ayz: float = 0.0
    Ac: float = 0.0

    def __post_init__(self):
        for name in OBSERVABLE_NAMES:
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValueError(f"Observable {name} is not finite: {value}.")
            object.__setattr__(self, name, float(value))

    @classmethod
    def from_array(cls, values) -> "ObservableVector":
        values = np.asarray(values, dtype=float)
        if values.shape != (len(OBSERVABLE_NAMES),):
            raise ValueError(
                f"Expected {len(OBSERVABLE_NAMES)} observables,"
                f" got shape {values.shape}."
            )
        return cls(*values)

    @classmethod
    def from_mapping(cls, values: Mapping[str, float]) -> "ObservableVector":
        unknown = set(values) - set(OBSERVABLE_NAMES)
        if unknown:
            raise ValueError(f"Unknown observables: {sorted(unknown)}.")
        return cls(**{name: float(v) for name, v in values.items()})

    def to_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    def to_dict(self) -> Dict[str, float]:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    def block(self, index: int) -> np.ndarray:
        """The components belonging to one of the five blocks."""
        return self.to_array()[list(BLOCK_INDICES[index])]

    def off_block_one(self) -> List[float]:
        """All components outside block 1."""
        keep = set(BLOCK_INDICES[1])
        return [
            value
            for i, value in enumerate(self.to_array())
            if i not in keep
        ]

    @property
    def dipolar_and_zero_quantum(self) -> float:
        """Mxx + Myy + Mzz, conserved by a fully common environment."""
        return self.Mc + self.Mzz
