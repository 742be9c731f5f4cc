"""Exact second-moment algebra for zero-mean jointly Gaussian vectors.

This is the independent oracle behind every closed-form rate in the package:
differential entropy, conditional entropy and mutual information are computed
directly from covariance sub-blocks, and maximal ratio combining collapses a
bank of scaled-state observations into a single sufficient statistic.

All entropies and rates are in bits: ``h = 0.5 * log2((2*pi*e)^k * det S)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DegenerateConditioningError,
    DegenerateDistributionError,
    InvalidParameterError,
    NoInformationError,
)

LOG2_2PIE = math.log2(2.0 * math.pi * math.e)

# Determinants below this raise instead of silently returning -inf entropies;
# the bound chains in this package never need degenerate conditioning, so a
# singular block signals a modeling bug.
DET_FLOOR = 1e-300
# Conditioning blocks with eigenvalues below this are treated as singular.
CONDITIONING_EIG_FLOOR = 1e-12

_SYMMETRY_TOL = 1e-12
_PSD_SLACK = -1e-10


@dataclass(frozen=True)
class GaussianVector:
    """Zero-mean jointly Gaussian vector with named coordinates.

    The covariance must be symmetric to 1e-12 and positive semi-definite up
    to a small numerical slack; it is stored symmetrized and read-only.
    """

    names: tuple[str, ...]
    covariance: np.ndarray

    def __post_init__(self):
        names = tuple(str(n) for n in self.names)
        if len(set(names)) != len(names):
            raise InvalidParameterError("coordinate names must be unique")
        cov = np.asarray(self.covariance, dtype=float)
        if cov.ndim != 2 or cov.shape[0] != cov.shape[1]:
            raise InvalidParameterError("covariance must be a square matrix")
        if cov.shape[0] != len(names):
            raise InvalidParameterError("covariance order must match the number of names")
        scale = max(1.0, float(np.max(np.abs(cov))) if cov.size else 1.0)
        if float(np.max(np.abs(cov - cov.T))) > _SYMMETRY_TOL * scale:
            raise InvalidParameterError("covariance must be symmetric to 1e-12")
        cov = 0.5 * (cov + cov.T)
        if float(np.linalg.eigvalsh(cov).min()) < _PSD_SLACK * scale:
            raise InvalidParameterError("covariance must be positive semi-definite")
        cov.setflags(write=False)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "covariance", cov)

    @classmethod
    def independent(cls, variances: Mapping[str, float]) -> "GaussianVector":
        """Vector of independent coordinates with the given variances."""
        names = tuple(variances)
        return cls(names, np.diag([float(variances[n]) for n in names]))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise InvalidParameterError(f"unknown coordinate {name!r}") from None

    def extend(
        self,
        name: str,
        coefficients: Mapping[str, float],
        extra_variance: float = 0.0,
    ) -> "GaussianVector":
        """Append the linear combination ``sum_i c_i * X_i`` plus optional
        independent noise of variance ``extra_variance`` as a new coordinate."""
        if extra_variance < 0.0:
            raise InvalidParameterError("extra_variance must be >= 0")
        weights = np.zeros(len(self.names))
        for key, c in coefficients.items():
            weights[self.index(key)] = float(c)
        cov = self.covariance
        cross = cov @ weights
        var = float(weights @ cross) + float(extra_variance)
        n = len(self.names)
        out = np.empty((n + 1, n + 1))
        out[:n, :n] = cov
        out[:n, n] = cross
        out[n, :n] = cross
        out[n, n] = var
        return GaussianVector(self.names + (str(name),), out)

    def _indices(self, coords: Iterable[str]) -> list[int]:
        idx = [self.index(c) for c in coords]
        if len(set(idx)) != len(idx):
            raise InvalidParameterError("coordinate labels must not repeat")
        return idx

    def block(self, coords: Sequence[str]) -> np.ndarray:
        idx = self._indices(coords)
        return self.covariance[np.ix_(idx, idx)]


@dataclass(frozen=True)
class EntropyValue:
    """Differential entropy in bits, tagged with its conditioning set."""

    value: float
    conditioning: tuple[str, ...] = ()


def _log2_det(block: np.ndarray, what: str) -> float:
    if block.size == 0:
        raise InvalidParameterError(f"{what} requires at least one coordinate")
    sign, logdet = np.linalg.slogdet(block)
    if sign <= 0.0 or logdet < math.log(DET_FLOOR):
        raise DegenerateDistributionError(f"{what} covariance block is singular")
    return logdet / math.log(2.0)


def entropy(g: GaussianVector, coords: Iterable[str]) -> EntropyValue:
    """Differential entropy of the selected coordinates, in bits."""
    coords = tuple(coords)
    block = g.block(coords)
    return EntropyValue(0.5 * (len(coords) * LOG2_2PIE + _log2_det(block, "entropy")))


def conditional_entropy(
    g: GaussianVector, target: Iterable[str], given: Iterable[str]
) -> EntropyValue:
    """Entropy of ``target`` given ``given`` (Gaussian conditional law).

    Computed as ``h(target, given) - h(given)``, which equals the entropy of
    the Schur complement of the conditioning block.
    """
    target = tuple(target)
    given = tuple(given)
    if not given:
        return EntropyValue(entropy(g, target).value, ())
    overlap = set(target) & set(given)
    if overlap:
        raise DegenerateConditioningError(
            f"conditioning on the target coordinates {sorted(overlap)} is degenerate"
        )
    given_block = g.block(given)
    if float(np.linalg.eigvalsh(given_block).min()) < CONDITIONING_EIG_FLOOR:
        raise DegenerateConditioningError("conditioning block is singular")
    h_joint = entropy(g, target + given).value
    h_given = entropy(g, given).value
    return EntropyValue(h_joint - h_given, given)


def mutual_information(g: GaussianVector, a: Iterable[str], b: Iterable[str]) -> float:
    """Mutual information ``h(a) + h(b) - h(a, b)`` in bits.

    Exact arithmetic would give a nonnegative value; floating point keeps the
    result above -1e-9 for well-conditioned blocks.
    """
    a = tuple(a)
    b = tuple(b)
    if set(a) & set(b):
        raise InvalidParameterError("mutual information requires disjoint label sets")
    return entropy(g, a).value + entropy(g, b).value - entropy(g, a + b).value


def mrc_combine(amplitudes: Sequence[float]) -> float:
    """Effective noise variance ``1 / sum(a_j^2)`` of the combined statistic.

    Observations ``{a_j*S + Z_j}`` with unit noises collapse into the
    sufficient statistic ``S + Z~`` where ``Z~`` has the returned variance.
    """
    amps = [float(a) for a in amplitudes]
    if not amps:
        raise NoInformationError("combining requires at least one observation")
    total = sum(a * a for a in amps)
    if total <= 0.0:
        raise NoInformationError("all-zero amplitudes carry no state information")
    return 1.0 / total


def costa_mismatched_rate(
    power: float, state_power: float, a_precoded: float, a_actual: float
) -> float:
    """Rate of precoding against ``a_precoded*S`` on a channel with actual
    interference ``a_actual*S``, evaluated exactly from the joint covariance.

    The auxiliary is ``U = X + (P/(P+1)) * a_precoded * S`` and the rate is
    ``I(U; Y) - I(U; S)`` for ``Y = X + a_actual*S + Z``.  Matched precoding
    (``a_precoded == a_actual``) recovers the interference-free ``0.5*log2(1+P)``.
    """
    if power <= 0.0 or state_power <= 0.0:
        raise InvalidParameterError("power and state_power must be > 0")
    if a_precoded < 0.0 or a_actual < 0.0:
        raise InvalidParameterError("fading amplitudes must be >= 0")
    lam = power / (power + 1.0) * a_precoded
    g = (
        GaussianVector.independent({"X": power, "S": state_power, "Z": 1.0})
        .extend("U", {"X": 1.0, "S": lam})
        .extend("Y", {"X": 1.0, "S": a_actual, "Z": 1.0})
    )
    return mutual_information(g, ("U",), ("Y",)) - mutual_information(g, ("U",), ("S",))
