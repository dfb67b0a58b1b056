"""The purpose of this file is to provide the validated value types that
describe a qubit pair, its environment and the second-order dipolar rates
derived from them.

Rates and frequencies are in physical units (rate = 1/time). The scaled
view used throughout the figures divides every rate by J, so that time is
measured in units of 1/J.
"""

from dataclasses import asdict, dataclass, field
from typing import Dict, Optional

import numpy as np


@dataclass(frozen=True)
class AngularConfig:
    """Orientation of the inter-spin vector relative to the field."""

    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.theta <= np.pi:
            raise ValueError(
                f"Polar angle theta must lie in [0, pi], got {self.theta}."
            )
        if not 0.0 <= self.phi < 2 * np.pi:
            raise ValueError(
                f"Azimuthal angle phi must lie in [0, 2 pi), got {self.phi}."
            )


@dataclass(frozen=True)
class ScaledRates:
    """Dipolar rates given directly in units of J (kappa*_m = kappa_m / J).

    Only kappa1 and kappa2 enter the block-1 dynamics, the remaining
    entries default to zero.
    """

    kappa1: float = 0.0
    kappa2: float = 0.0
    kappa0: float = 0.0
    delta_kappa1: float = 0.0
    delta_kappa2: float = 0.0
    omega_d0: float = 0.0

    def __post_init__(self):
        for name in ("kappa0", "kappa1", "kappa2"):
            value = getattr(self, name)
            if value < 0 or not np.isfinite(value):
                raise ValueError(
                    f"Scaled rate {name} must be finite and non-negative,"
                    f" got {value}."
                )


@dataclass(frozen=True)
class PhysicalParams:
    """The physical inputs of the model.

    J, delta_omega: real and imaginary part of the environment spectral
        density (rates).
    M0: equilibrium polarization, in [-1, 1].
    alpha: commonness of the environment, 0 for independent environments
        and 1 for a single shared one.
    omega0: Larmor frequency. tau_c: fluctuation correlation time.
    omega_d: dipolar coupling strength. ang: orientation of the dipolar
        vector.
    scaled_rates: when given, replaces the rates that would otherwise be
        computed from (omega_d, ang, tau_c, omega0).
    """

    J: float = 1.0
    delta_omega: float = 0.0
    M0: float = 0.0
    alpha: float = 0.0
    omega0: float = 0.0
    tau_c: float = 1.0
    omega_d: float = 0.0
    ang: AngularConfig = field(default_factory=AngularConfig)
    scaled_rates: Optional[ScaledRates] = None

    def __post_init__(self):
        if not self.J > 0:
            raise ValueError(f"J must be strictly positive, got {self.J}.")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}.")
        if not -1.0 <= self.M0 <= 1.0:
            raise ValueError(f"M0 must lie in [-1, 1], got {self.M0}.")
        if not self.tau_c > 0:
            raise ValueError(
                f"tau_c must be strictly positive, got {self.tau_c}."
            )
        if self.omega_d < 0:
            raise ValueError(
                f"omega_d must be non-negative, got {self.omega_d}."
            )

    @classmethod
    def from_scaled(
        cls,
        kappa1: float,
        kappa2: Optional[float] = None,
        M0: float = 0.0,
        alpha: float = 0.0,
        J: float = 1.0,
        delta_omega: float = 0.0,
        **extra_rates: float,
    ) -> "PhysicalParams":
        """Builds parameters from scaled dipolar rates, as in the figures.

        kappa2 defaults to kappa1. Further ScaledRates fields (kappa0,
        delta_kappa1, delta_kappa2, omega_d0) can be passed by keyword.
        """
        if kappa2 is None:
            kappa2 = kappa1
        rates = ScaledRates(kappa1=kappa1, kappa2=kappa2, **extra_rates)
        return cls(
            J=J,
            delta_omega=delta_omega,
            M0=M0,
            alpha=alpha,
            scaled_rates=rates,
        )

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass(frozen=True)
class RateSet:
    """Second-order dipolar rates for the orders m = 0, 1, 2.

    Negative orders follow from kappa_{-m} = kappa_m and
    delta_kappa_{-m} = -delta_kappa_m; delta_kappa_0 is zero.
    """

    kappa: Dict[int, float] = field(
        default_factory=lambda: {0: 0.0, 1: 0.0, 2: 0.0}
    )
    delta_kappa: Dict[int, float] = field(
        default_factory=lambda: {1: 0.0, 2: 0.0}
    )
    omega_d0: float = 0.0

    def __post_init__(self):
        if sorted(self.kappa) != [0, 1, 2]:
            raise ValueError("kappa must be keyed by the orders 0, 1 and 2.")
        if sorted(self.delta_kappa) != [1, 2]:
            raise ValueError("delta_kappa must be keyed by the orders 1, 2.")
        for m, value in self.kappa.items():
            if value < 0 or not np.isfinite(value):
                raise ValueError(
                    f"kappa_{m} must be finite and non-negative, got {value}."
                )

    def kappa_of(self, m: int) -> float:
        return self.kappa[abs(m)]

    def delta_kappa_of(self, m: int) -> float:
        if m == 0:
            return 0.0
        return float(np.sign(m)) * self.delta_kappa[abs(m)]

    def scaled(self, J: float) -> Dict[str, float]:
        """The rates in units of J, keyed like ScaledRates."""
        return {
            "kappa0": self.kappa[0] / J,
            "kappa1": self.kappa[1] / J,
            "kappa2": self.kappa[2] / J,
            "delta_kappa1": self.delta_kappa[1] / J,
            "delta_kappa2": self.delta_kappa[2] / J,
            "omega_d0": self.omega_d0 / J,
        }
