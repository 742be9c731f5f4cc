"""Named verification suites behind the ``verify`` CLI subcommand.

Each suite re-checks a family of analytic identities or inequalities on a
deterministic grid and reports the worst slack seen (nonnegative slack means
the property holds).  Suites: ``gap2``, ``strongfading``, ``proofterms``,
``oracle``, ``continuity``, ``normalization``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import bounds_m, bounds_two, channel, gaussian

_L2 = math.log2

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class CheckResult:
    name: str
    slack: float
    passed: bool
    detail: str = ""


def _check(name: str, slack: float, tolerance: float, detail: str = "") -> CheckResult:
    return CheckResult(name, slack, slack >= -tolerance, detail)


def suite_oracle(grid: int = 40, seed: int = 7, tolerance: float = 1e-10) -> list[CheckResult]:
    """Chain rule, conditioning, MI symmetry, combining sufficiency, matched precoding."""
    rng = np.random.default_rng(seed)
    chain_worst = math.inf
    cond_worst = math.inf
    sym_worst = math.inf
    nonneg_worst = math.inf
    for _ in range(grid):
        dim = int(rng.integers(2, 9))
        basis = rng.standard_normal((dim, dim))
        cov = basis @ basis.T + 1e-3 * np.eye(dim)
        names = tuple(f"c{i}" for i in range(dim))
        g = gaussian.GaussianVector(names, cov)
        cut = int(rng.integers(1, dim))
        a, b = names[:cut], names[cut:]
        h_ab = gaussian.entropy(g, names).value
        h_a = gaussian.entropy(g, a).value
        h_b_given = gaussian.conditional_entropy(g, b, a).value
        chain_worst = min(chain_worst, -abs(h_ab - (h_a + h_b_given)))
        h_b = gaussian.entropy(g, b).value
        cond_worst = min(cond_worst, h_b - h_b_given)
        mi_ab = gaussian.mutual_information(g, a, b)
        mi_ba = gaussian.mutual_information(g, b, a)
        sym_worst = min(sym_worst, -abs(mi_ab - mi_ba))
        nonneg_worst = min(nonneg_worst, mi_ab)

    mrc_worst = math.inf
    for _ in range(grid):
        k = int(rng.integers(1, 5))
        amps = rng.uniform(0.2, 4.0, size=k)
        g = gaussian.GaussianVector.independent(
            {"S": 1.0, **{f"Z{i}": 1.0 for i in range(k)}, "W": 1.0}
        )
        for i, a in enumerate(amps):
            g = g.extend(f"O{i}", {"S": float(a), f"Z{i}": 1.0})
        g = g.extend("T", {"S": float(rng.uniform(0.2, 3.0)), "W": 1.0})
        zt_var = gaussian.mrc_combine(amps)
        weights = {f"O{i}": float(a) * zt_var for i, a in enumerate(amps)}
        g = g.extend("C", weights)  # combined statistic S + Z~
        obs = tuple(f"O{i}" for i in range(k))
        h_all = gaussian.conditional_entropy(g, ("T",), obs).value
        h_comb = gaussian.conditional_entropy(g, ("T",), ("C",)).value
        mrc_worst = min(mrc_worst, -abs(h_all - h_comb))

    costa_worst = math.inf
    for _ in range(grid):
        p = float(rng.uniform(0.2, 50.0))
        q = float(rng.uniform(0.2, 5.0))
        a = float(rng.uniform(0.0, 6.0))
        rate = gaussian.costa_mismatched_rate(p, q, a, a)
        costa_worst = min(costa_worst, -abs(rate - 0.5 * _L2(1.0 + p)))

    return [
        _check("chain-rule", chain_worst, 1e-10),
        _check("conditioning-reduces-entropy", cond_worst, 1e-10),
        _check("mi-symmetry", sym_worst, 1e-10),
        _check("mi-nonnegative", nonneg_worst, 1e-10),
        _check("combining-sufficiency", mrc_worst, 1e-10),
        _check("matched-precoding-rate", costa_worst, tolerance),
    ]


def _triple_grid(grid: int) -> list[bounds_two.TwoFadingInstance]:
    powers = np.logspace(-1.0, 3.0, grid)
    a2s = np.logspace(math.log10(0.05), 2.0, grid)
    fracs = (0.0, 0.25, 0.5, 0.8, 0.95)
    out = []
    for p in powers:
        for a2 in a2s:
            for f in fracs:
                out.append(bounds_two.TwoFadingInstance(float(p), float(f * a2), float(a2)))
    return out


def suite_gap2(grid: int = 10, tolerance: float = DEFAULT_TOLERANCE) -> list[CheckResult]:
    """Per-case gap bounds, the numeric-bound fallback, and bound ordering."""
    case_worst = math.inf
    order_worst = math.inf
    fallback_worst = math.inf
    carbon_worst = math.inf
    cases_seen = set()
    for inst in _triple_grid(grid):
        report = bounds_two.gap2(inst)
        cases_seen.add(report.case)
        if report.case_bound is not None:
            case_worst = min(case_worst, report.case_bound - report.realized_gap)
        numeric = bounds_two.outer2_numeric(inst)
        order_worst = min(order_worst, numeric.value - report.inner.value)
        a1, a2 = inst.effective
        if inst.power >= 1.0 and a2 * a2 >= 1.0 and a2 - a1 >= 4.0:
            fallback_worst = min(
                fallback_worst, report.bound - (numeric.value - report.inner.value)
            )
    for p in np.logspace(-1.0, 3.0, grid):
        for a in np.logspace(-2.0, 2.0, grid):
            hi = bounds_two.carbon_outer(float(p), float(a)).value
            lo = bounds_two.carbon_inner(float(p), float(a)).value
            carbon_worst = min(carbon_worst, hi - lo)
    return [
        _check("case-gap-bounds", case_worst, tolerance, f"cases seen: {sorted(cases_seen)}"),
        _check("inner-below-numeric-outer", order_worst, tolerance),
        _check("numeric-fallback-gap", fallback_worst, tolerance),
        _check("carbon-inner-below-outer", carbon_worst, tolerance),
    ]


def _strong_chain(power: float, m: int) -> channel.FadingSet:
    """Geometric chain [0, (P+1), (P+1)^2, ...]: strong under both variants for P >= 1."""
    return channel.FadingSet(tuple((power + 1.0) ** k if k else 0.0 for k in range(m)))


def suite_strongfading(tolerance: float = 1e-12) -> list[CheckResult]:
    """Exact gap identity and subset-bound consistency on strong chains."""
    gap_worst = math.inf
    subset_worst = math.inf
    for p in (1.0, 15.0, 255.0):
        for m in range(2, 7):
            inst = bounds_m.MFadingInstance(p, _strong_chain(p, m))
            rep = bounds_m.strong_fading_gap(inst)
            gap_worst = min(gap_worst, -abs(rep.realized_gap - rep.bound))
            sub = bounds_m.subset_outer(inst)
            inner = bounds_m.time_sharing_inner(inst)
            subset_worst = min(subset_worst, sub.value - inner.value)
    return [
        _check("gap-identity", gap_worst, tolerance),
        _check("subset-bound-above-inner", subset_worst, 1e-9),
    ]


def suite_proofterms(
    m_max: int = 4, rho_points: int = 201, tolerance: float = DEFAULT_TOLERANCE
) -> list[CheckResult]:
    """Entropy-chain inequalities on power-sum strong chains."""
    rho = np.linspace(-1.0, 1.0, rho_points)
    out = []
    for p in (1.0, 15.0):
        for m in range(2, m_max + 1):
            inst = bounds_m.MFadingInstance(p, _strong_chain(p, m), variant="power")
            report = bounds_m.check_proof_terms(inst, rho)
            slack = min(
                min(e.combining_slack for e in report.entries),
                min(
                    (e.difference_slack for e in report.entries if e.difference_slack is not None),
                    default=math.inf,
                ),
                report.final_slack,
            )
            out.append(_check(f"chain-P{p:g}-M{m}", slack, tolerance))
    return out


def suite_continuity(tolerance: float = DEFAULT_TOLERANCE) -> list[CheckResult]:
    """One-sided limits of the closed-form inner bound at its junctions."""
    worst_one = math.inf
    worst_two = math.inf
    for p in np.logspace(-1.0, 3.0, 25):
        p = float(p)
        eps = 1e-12
        lo = bounds_two.inner2_closed(bounds_two.TwoFadingInstance(p, 0.0, 1.0 - eps)).value
        hi = bounds_two.inner2_closed(bounds_two.TwoFadingInstance(p, 0.0, 1.0 + eps)).value
        worst_one = min(worst_one, -abs(hi - lo))
        a = math.sqrt(p + 1.0)
        lo = bounds_two.inner2_closed(bounds_two.TwoFadingInstance(p, 0.0, a * (1 - 1e-13))).value
        hi = bounds_two.inner2_closed(bounds_two.TwoFadingInstance(p, 0.0, a * (1 + 1e-13))).value
        worst_two = min(worst_two, -abs(hi - lo))
    return [
        _check("junction-at-unit-fading", worst_one, tolerance),
        _check("junction-at-power-threshold", worst_two, tolerance),
    ]


def suite_normalization(
    grid: int = 50, seed: int = 11, tolerance: float = 1e-12
) -> list[CheckResult]:
    """Bounds agree across equivalent generalized channels."""
    rng = np.random.default_rng(seed)
    worst = math.inf
    for _ in range(grid):
        p = float(rng.uniform(0.2, 100.0))
        a2 = float(rng.uniform(0.1, 20.0))
        a1 = float(rng.uniform(0.0, 0.9) * a2)
        scales = [(4.0, 16.0), (0.25, 1.0), (1024.0, 0.0625)]
        values = []
        for t, u in scales:
            lift = math.sqrt(t / u)  # exact for dyadic t, u
            g = channel.GeneralizedParams(
                power=p * t,
                state_power=u,
                noise_power=t,
                fading=(a1 * lift, a2 * lift),
            )
            c = channel.normalize(g)
            inst = bounds_two.TwoFadingInstance(c.power, *c.fading.values)
            values.append(
                (
                    bounds_two.inner2_closed(inst).value,
                    bounds_two.outer2_closed(inst).value,
                    bounds_two.outer2_numeric(inst).value,
                )
            )
        base = values[0]
        for other in values[1:]:
            worst = min(worst, -max(abs(x - y) for x, y in zip(base, other)))
    return [_check("bound-invariance", worst, tolerance)]


SUITES: dict[str, Callable[..., list[CheckResult]]] = {
    "gap2": suite_gap2,
    "strongfading": suite_strongfading,
    "proofterms": suite_proofterms,
    "oracle": suite_oracle,
    "continuity": suite_continuity,
    "normalization": suite_normalization,
}
