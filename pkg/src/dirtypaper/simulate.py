"""Monte Carlo estimation of achievable rates on the compound fading channel.

Draws sample blocks of the state and the per-receiver noises, synthesizes the
transmit variables of a configured scheme, and plugs empirical second moments
into the closed-form Gaussian mutual-information expression.  The schemes are
jointly Gaussian, so the plug-in estimator is consistent for exactly the
rates the closed-form bounds describe.

Reproducibility: every random variable has its own counter-based (Philox)
stream with key ``[seed, cell*64 + var]`` where ``var`` is 0 for the state,
``1 + j`` for receiver ``j``'s noise (``j = 0..M-1``), 40 for the codeword
that treats the state as noise and 41 for the precoded codeword.  Estimates
are plain dot-product moments over the full block, so they do not depend on
how the block might be partitioned across workers; standard errors come from
a fixed number of contiguous batches.

Rate accounting: the codeword that treats the state as noise is decoded first
at every receiver and then removed.  The precoded codeword's rate is credited
per slot at the receiver whose fading value the slot targets (time sharing);
precoding against a value that is not any receiver's fading (e.g. the average
realization) is a single slot credited at every receiver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .channel import ChannelParams
from .errors import InvalidParameterError

_L2 = math.log2

MIN_SAMPLES = 10_000  # below this the plug-in bias dominates
STDERR_BATCHES = 10
_VAR_STATE = 0
_VAR_NOISE_BASE = 1
_VAR_TIN = 40
_VAR_PRECODED = 41
_CELL_STRIDE = 64

SCHEME_KINDS = (
    "tin",
    "costa-matched",
    "costa-average",
    "costa-timeshare",
    "two-codeword",
)


@dataclass(frozen=True)
class SchemeConfig:
    """Transmission scheme: codeword powers and per-slot precoding targets.

    ``beta`` is the fraction of power on the state-as-noise codeword; the
    rest is precoded.  ``slot_targets`` lists the precoding target of each
    equal-length slot (``None`` defers to the instance's fading set).
    """

    kind: str
    beta: float = 0.0
    target: Optional[float] = None
    slot_targets: Optional[tuple[float, ...]] = None

    def __post_init__(self):
        if self.kind not in SCHEME_KINDS:
            raise InvalidParameterError(
                f"unknown scheme {self.kind!r}; expected one of {SCHEME_KINDS}"
            )
        if not 0.0 <= self.beta <= 1.0:
            raise InvalidParameterError("beta must lie in [0, 1]")

    @classmethod
    def tin(cls) -> "SchemeConfig":
        return cls("tin", beta=1.0)

    @classmethod
    def costa_matched(cls, target: float) -> "SchemeConfig":
        if target < 0.0:
            raise InvalidParameterError("precoding target must be >= 0")
        return cls("costa-matched", target=float(target))

    @classmethod
    def costa_average(cls) -> "SchemeConfig":
        return cls("costa-average")

    @classmethod
    def costa_timeshare(cls, targets: Optional[Sequence[float]] = None) -> "SchemeConfig":
        slots = tuple(float(t) for t in targets) if targets is not None else None
        return cls("costa-timeshare", slot_targets=slots)

    @classmethod
    def two_codeword(
        cls, beta: float, targets: Optional[Sequence[float]] = None
    ) -> "SchemeConfig":
        slots = tuple(float(t) for t in targets) if targets is not None else None
        return cls("two-codeword", beta=float(beta), slot_targets=slots)

    def label(self) -> str:
        if self.kind == "two-codeword":
            return f"two-codeword(beta={self.beta:g})"
        if self.kind == "costa-matched":
            return f"costa-matched(a={self.target:g})"
        return self.kind


@dataclass(frozen=True)
class _Slot:
    weight: float
    target: Optional[float]  # None: no precoding in this slot
    matched: Optional[tuple[int, ...]]  # receiver indices credited; None = all


@dataclass(frozen=True)
class SimEstimate:
    """Per-receiver plug-in rate estimates for one instance and scheme."""

    scheme: str
    receivers: tuple[float, ...]
    rates: tuple[float, ...]
    stderrs: tuple[float, ...]
    compound_rate: float
    compound_stderr: float
    n_samples: int
    seed: int

    def __post_init__(self):
        if self.n_samples < 1:
            raise InvalidParameterError("n_samples must be >= 1")
        if any(se < 0.0 for se in self.stderrs):
            raise InvalidParameterError("standard errors must be >= 0")
        if self.compound_rate != min(self.rates):
            raise InvalidParameterError("compound rate must equal the receiver minimum")


def _resolve_slots(cfg: SchemeConfig, fading: tuple[float, ...]) -> list[_Slot]:
    if cfg.kind == "tin":
        return []
    if cfg.kind == "costa-matched":
        if cfg.target is None:
            raise InvalidParameterError("costa-matched requires a precoding target")
        return [_Slot(1.0, cfg.target, None)]
    if cfg.kind == "costa-average":
        return [_Slot(1.0, sum(fading) / len(fading), None)]
    # slot-scheduled schemes: targets must come from the fading set
    targets = cfg.slot_targets if cfg.slot_targets is not None else fading
    slots = []
    w = 1.0 / len(targets)
    for t in targets:
        matched = tuple(j for j, a in enumerate(fading) if _amplitudes_equal(t, a))
        if not matched:
            raise InvalidParameterError(f"unknown precoding target {t!r}: not a fading value")
        slots.append(_Slot(w, t, matched))
    return slots


def _amplitudes_equal(x: float, y: float) -> bool:
    return abs(x - y) <= 1e-12 * max(1.0, abs(x), abs(y))


def _stream(seed: int, cell: int, var: int, n: int) -> np.ndarray:
    key = np.array([seed, cell * _CELL_STRIDE + var], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key)).standard_normal(n)


def _mi_hat(a: np.ndarray, b: np.ndarray) -> float:
    """Gaussian plug-in mutual information from raw second moments."""
    n = a.shape[0]
    saa = float(a @ a) / n
    sbb = float(b @ b) / n
    sab = float(a @ b) / n
    det = saa * sbb - sab * sab
    if det <= 0.0:
        raise InvalidParameterError("degenerate empirical covariance")
    return 0.5 * _L2(saa * sbb / det)


def _batch_stderr(a: np.ndarray, b: np.ndarray) -> float:
    """Standard error of the plug-in estimate from fixed contiguous batches."""
    n = a.shape[0]
    edges = np.linspace(0, n, STDERR_BATCHES + 1, dtype=int)
    vals = [_mi_hat(a[lo:hi], b[lo:hi]) for lo, hi in zip(edges[:-1], edges[1:])]
    return float(np.std(vals, ddof=1) / math.sqrt(len(vals)))


def _gp_rate_and_se(u, y, s) -> tuple[float, float]:
    rate = _mi_hat(u, y) - _mi_hat(u, s)
    n = u.shape[0]
    edges = np.linspace(0, n, STDERR_BATCHES + 1, dtype=int)
    vals = [
        _mi_hat(u[lo:hi], y[lo:hi]) - _mi_hat(u[lo:hi], s[lo:hi])
        for lo, hi in zip(edges[:-1], edges[1:])
    ]
    se = float(np.std(vals, ddof=1) / math.sqrt(len(vals)))
    return rate, se


def simulate(
    params: ChannelParams,
    cfg: SchemeConfig,
    n_samples: int,
    seed: int,
    cell: int = 0,
) -> SimEstimate:
    """Estimate per-receiver achievable rates for one scheme and instance.

    Requires ``n_samples >= 10_000``.  The returned compound rate is the
    exact minimum of the per-receiver estimates.
    """
    if n_samples < MIN_SAMPLES:
        raise InvalidParameterError(f"n_samples must be >= {MIN_SAMPLES}")
    if seed < 0 or seed >= 2**63:
        raise InvalidParameterError("seed must fit in a nonnegative 63-bit integer")

    fading = params.fading.values
    m = len(fading)
    slots = _resolve_slots(cfg, fading)
    p = params.power
    tin_power = cfg.beta * p if cfg.kind in ("tin", "two-codeword") else 0.0
    precoded_power = p - tin_power if cfg.kind != "tin" else 0.0

    n = int(n_samples)
    s = math.sqrt(params.state_power) * _stream(seed, cell, _VAR_STATE, n)
    noises = [
        math.sqrt(params.noise_power) * _stream(seed, cell, _VAR_NOISE_BASE + j, n)
        for j in range(m)
    ]
    x_tin = (
        math.sqrt(tin_power) * _stream(seed, cell, _VAR_TIN, n) if tin_power > 0.0 else None
    )
    x_pre = (
        math.sqrt(precoded_power) * _stream(seed, cell, _VAR_PRECODED, n)
        if precoded_power > 0.0
        else None
    )

    x = np.zeros(n)
    if x_tin is not None:
        x = x + x_tin
    if x_pre is not None:
        x = x + x_pre
    outputs = [x + a * s + z for a, z in zip(fading, noises)]

    rates = [0.0] * m
    variances = [0.0] * m

    if x_tin is not None:
        for j in range(m):
            rates[j] += _mi_hat(x_tin, outputs[j])
            variances[j] += _batch_stderr(x_tin, outputs[j]) ** 2

    if x_pre is not None and slots:
        lam = precoded_power / (precoded_power + 1.0)
        edges = np.linspace(0, n, len(slots) + 1, dtype=int)
        for slot, lo, hi in zip(slots, edges[:-1], edges[1:]):
            w = (hi - lo) / n
            sl = slice(lo, hi)
            u = x_pre[sl] + lam * slot.target * s[sl]
            credited = range(m) if slot.matched is None else slot.matched
            for j in credited:
                resid = outputs[j][sl] - (x_tin[sl] if x_tin is not None else 0.0)
                gp, se = _gp_rate_and_se(u, resid, s[sl])
                rates[j] += w * gp
                variances[j] += (w * se) ** 2

    stderrs = tuple(math.sqrt(v) for v in variances)
    rates = tuple(rates)
    k = min(range(m), key=lambda j: rates[j])
    return SimEstimate(
        scheme=cfg.label(),
        receivers=fading,
        rates=rates,
        stderrs=stderrs,
        compound_rate=rates[k],
        compound_stderr=stderrs[k],
        n_samples=n,
        seed=seed,
    )


def sweep_simulate(
    grid: Sequence[ChannelParams],
    cfg: SchemeConfig,
    n_samples: int,
    seed: int,
) -> list[SimEstimate]:
    """Run :func:`simulate` over a grid with deterministic per-cell streams.

    Cell ``i`` uses stream keys derived from ``(seed, i)``, so the result
    list is reproducible and order-stable regardless of execution order.
    """
    cells = list(grid)
    if not cells:
        raise InvalidParameterError("sweep grid must not be empty")
    return [simulate(p, cfg, n_samples, seed, cell=i) for i, p in enumerate(cells)]
