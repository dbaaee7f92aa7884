"""Model definition: drive protocol, units, and reduced-parameter algebra.

The model is the periodically driven sine-Gordon chain with Hamiltonian
density (K/2) P^2 + (1/2K) (d_x phi)^2 - g(t) cos(phi) and drive
g(t) = g0 + g1*cos(gamma*t).  The sound velocity is set to 1, so momenta
and frequencies share units.  Every stability method in this package
depends on the parameters only through the reduced triple
(K*g0/gamma^2, K*g1/gamma^2, Lambda/gamma) plus K itself.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass


@dataclass(frozen=True)
class ModelParams:
    """Physical parameters of the driven sine-Gordon model.

    K      : Luttinger parameter (dimensionless, > 0)
    g0     : mean drive amplitude (frequency^2, >= 0)
    g1     : drive modulation amplitude (frequency^2, >= 0)
    gamma  : drive angular frequency (> 0)
    Lambda : UV momentum cutoff (> 0; equals max frequency since u = 1)
    """

    K: float
    g0: float
    g1: float
    gamma: float
    Lambda: float

    def __post_init__(self):
        if not (self.K > 0):
            raise ValueError(f"K must be positive, got {self.K}")
        if not (self.gamma > 0):
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not (self.Lambda > 0):
            raise ValueError(f"Lambda must be positive, got {self.Lambda}")
        if self.g0 < 0 or self.g1 < 0:
            raise ValueError("g0 and g1 must be non-negative")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.gamma

    def drive(self, t: float):
        """Instantaneous drive amplitude g(t) = g0 + g1*cos(gamma*t)."""
        import numpy as np

        return self.g0 + self.g1 * np.cos(self.gamma * np.asarray(t))

    def reduced(self) -> tuple[float, float, float]:
        """Reduced triple (K*g0/gamma^2, K*g1/gamma^2, Lambda/gamma)."""
        g2 = self.gamma**2
        return (self.K * self.g0 / g2, self.K * self.g1 / g2, self.Lambda / self.gamma)

    @classmethod
    def from_reduced(cls, K: float, kg0: float, kg1: float, lam: float,
                     gamma: float = 1.0) -> "ModelParams":
        """Build parameters from the reduced triple at a chosen gamma."""
        g2 = gamma**2
        return cls(K=K, g0=kg0 * g2 / K, g1=kg1 * g2 / K,
                   gamma=gamma, Lambda=lam * gamma)

    def to_dict(self) -> dict:
        return {"K": self.K, "g0": self.g0, "g1": self.g1,
                "gamma": self.gamma, "Lambda": self.Lambda}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "ModelParams":
        return cls(K=float(d["K"]), g0=float(d["g0"]), g1=float(d["g1"]),
                   gamma=float(d["gamma"]), Lambda=float(d["Lambda"]))

    @classmethod
    def from_json(cls, s: str) -> "ModelParams":
        return cls.from_dict(json.loads(s))
