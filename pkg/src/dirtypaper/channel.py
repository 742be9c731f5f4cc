"""Channel parameterization for the dirty paper channel with fading dirt.

The normalized model is ``Y = X + A*S + Z`` with unit-power state ``S``, unit
noise ``Z``, input power ``P`` and a fading amplitude ``A`` drawn from a
finite ordered set known to the receiver but not to the transmitter.  Every
bound in this package evaluates on the normalized form; :func:`normalize`
maps the general ``(P', Q', N', A')`` model onto it without changing any
achievable rate (divide the output by the noise amplitude and absorb the
state amplitude into the fading coefficient).

Also owns the "strong fading" predicate: amplitudes spaced so that each new
realization dominates the accumulated previous ones by a factor ``P + 1``.
Two variants of the accumulation are in circulation, one summing amplitudes
and one summing their squares; both are exposed through ``variant``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .errors import InvalidParameterError

#: Supported accumulation rules for the strong-fading chain condition.
STRONG_FADING_VARIANTS = ("amplitude", "power")

#: Exhaustive subset search scans 2^(M-1) candidates; cap the blow-up.
SUBSET_SEARCH_LIMIT = 20


@dataclass(frozen=True)
class FadingSet:
    """Strictly increasing, nonnegative fading amplitudes ``a_1 < ... < a_M``."""

    values: tuple[float, ...]

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if len(vals) < 1:
            raise InvalidParameterError("fading set must contain at least one value")
        if any(not math.isfinite(v) for v in vals):
            raise InvalidParameterError("fading values must be finite")
        if vals[0] < 0.0:
            raise InvalidParameterError("fading values must be nonnegative")
        for lo, hi in zip(vals, vals[1:]):
            if hi <= lo:
                raise InvalidParameterError(
                    "fading values must be strictly increasing (duplicates rejected)"
                )
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_iterable(cls, values: Iterable[float], dedupe: bool = False) -> "FadingSet":
        """Build a fading set, optionally collapsing exact duplicates first."""
        vals = [float(v) for v in values]
        if dedupe:
            vals = sorted(set(vals))
        return cls(tuple(vals))

    @property
    def m(self) -> int:
        return len(self.values)

    @property
    def spread(self) -> float:
        """Largest minus smallest amplitude."""
        return self.values[-1] - self.values[0]


@dataclass(frozen=True)
class ChannelParams:
    """Channel parameters; ``normalized`` is true for unit state and noise power."""

    power: float
    fading: FadingSet
    state_power: float = 1.0
    noise_power: float = 1.0

    def __post_init__(self):
        for name in ("power", "state_power", "noise_power"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0.0:
                raise InvalidParameterError(f"{name} must be finite and > 0")
            object.__setattr__(self, name, v)

    @property
    def normalized(self) -> bool:
        return self.state_power == 1.0 and self.noise_power == 1.0


@dataclass(frozen=True)
class GeneralizedParams:
    """Unnormalized channel ``Y = X + A'*S' + Z'`` with free state/noise powers."""

    power: float
    state_power: float
    noise_power: float
    fading: tuple[float, ...]

    def __post_init__(self):
        for name in ("power", "state_power", "noise_power"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v <= 0.0:
                raise InvalidParameterError(f"{name} must be finite and > 0")
            object.__setattr__(self, name, v)
        fad = tuple(float(a) for a in self.fading)
        if any(a < 0.0 or not math.isfinite(a) for a in fad):
            raise InvalidParameterError("fading values must be finite and >= 0")
        object.__setattr__(self, "fading", fad)


@dataclass(frozen=True)
class RateBound:
    """A named bound value in bits per channel use, with evaluation context."""

    name: str
    value: float
    params: ChannelParams
    optimizer_state: Optional[Mapping[str, object]] = None

    def __post_init__(self):
        if not math.isfinite(float(self.value)):
            raise InvalidParameterError(f"bound {self.name!r} evaluated to a non-finite value")


def normalize(g: GeneralizedParams) -> ChannelParams:
    """Map a generalized channel onto the unit-state, unit-noise form.

    The output has ``P = P'/N'`` and fading amplitudes ``A'*sqrt(Q'/N')``;
    every bound evaluated on the output equals the bound on the input
    channel because the map is an invertible per-sample scaling.
    """
    scale = math.sqrt(g.state_power / g.noise_power)
    fading = FadingSet(tuple(a * scale for a in g.fading))
    return ChannelParams(power=g.power / g.noise_power, fading=fading)


def as_generalized(c: ChannelParams) -> GeneralizedParams:
    """View channel parameters as a generalized-channel description."""
    return GeneralizedParams(
        power=c.power,
        state_power=c.state_power,
        noise_power=c.noise_power,
        fading=c.fading.values,
    )


def _prefix_accumulation(values: tuple[float, ...], variant: str) -> list[float]:
    if variant not in STRONG_FADING_VARIANTS:
        raise InvalidParameterError(
            f"unknown strong-fading variant {variant!r}; expected one of {STRONG_FADING_VARIANTS}"
        )
    acc = 0.0
    out = []
    for a in values:
        out.append(acc)
        acc += a if variant == "amplitude" else a * a
    return out


def _chain_holds(values: tuple[float, ...], power: float, variant: str) -> bool:
    prefixes = _prefix_accumulation(values, variant)
    thresh = power + 1.0
    return all(a * a >= thresh * pre for a, pre in zip(values[1:], prefixes[1:]))


def is_strong_fading(params: ChannelParams, variant: str = "amplitude") -> bool:
    """True iff ``a_1 = 0`` and each ``a_j^2`` dominates ``(P+1)`` times the
    accumulated earlier amplitudes (``variant="amplitude"``) or amplitude
    squares (``variant="power"``)."""
    if not params.normalized:
        raise InvalidParameterError("strong-fading predicate requires a normalized channel")
    vals = params.fading.values
    if vals[0] != 0.0:
        # validate the variant spelling even on the short-circuit path
        _prefix_accumulation(vals, variant)
        return False
    return _chain_holds(vals, params.power, variant)


def largest_strong_fading_subset(
    params: ChannelParams, variant: str = "amplitude"
) -> tuple[int, FadingSet]:
    """Maximum-cardinality subset of the fading set (containing 0) that
    satisfies the strong-fading chain condition, found by exhaustive search.

    Returns ``(K, subset)``.  Requires ``a_1 = 0``; the exhaustive scan is
    limited to ``M <= SUBSET_SEARCH_LIMIT``.
    """
    if not params.normalized:
        raise InvalidParameterError("subset search requires a normalized channel")
    vals = params.fading.values
    if vals[0] != 0.0:
        raise InvalidParameterError("subset search requires the smallest fading value to be 0")
    rest = vals[1:]
    m_rest = len(rest)
    if len(vals) > SUBSET_SEARCH_LIMIT:
        raise InvalidParameterError(
            f"exhaustive subset search supports at most M = {SUBSET_SEARCH_LIMIT} values"
        )
    _prefix_accumulation(vals, variant)  # validate variant up front

    best: tuple[float, ...] = (0.0,)
    for mask in range(1 << m_rest):
        cand = (0.0,) + tuple(rest[i] for i in range(m_rest) if mask >> i & 1)
        if len(cand) <= len(best):
            continue
        if _chain_holds(cand, params.power, variant):
            best = cand
    return len(best), FadingSet(best)
