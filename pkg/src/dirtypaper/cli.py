"""Command-line front end: evaluate bounds, verify invariants, run simulations.

Subcommands
-----------
``bounds2``   closed-form and numeric bounds for a two-fading instance
``boundsM``   strong-fading bounds for an M-value fading set
``simulate``  Monte Carlo rate estimation for a configured scheme
``sweep``     axis sweeps driven by a small key=value spec file
``verify``    run a named verification suite

CSV goes to standard output (or ``--out FILE``) with a fixed column order,
``.`` decimal separator, 12 significant digits and LF line endings.
Diagnostics go to standard error.  Exit codes: 0 success / all checks pass,
1 verification failure, 2 usage or validation error.  Rates are reported in
bits unless ``--nats`` converts them on output.  ``DPC_THREADS`` caps the
sweep worker count.
"""

from __future__ import annotations

import argparse
import itertools
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Optional, Sequence

from .bounds_m import (
    MFadingInstance,
    strong_fading_gap,
    strong_fading_outer,
    subset_outer,
    time_sharing_inner,
)
from .bounds_two import (
    TwoFadingInstance,
    carbon_inner,
    carbon_outer,
    costa_small_spread_gap,
    gap2,
    inner2_closed,
    outer2_closed,
    outer2_numeric,
)
from .channel import ChannelParams, FadingSet
from .errors import DirtyPaperError, RegimeViolationError
from .simulate import SCHEME_KINDS, SchemeConfig, simulate
from .verify import SUITES

LN2 = math.log(2.0)


def _fmt(x: object) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return "" if x is None else str(x)


class _Output:
    def __init__(self, path: Optional[str], nats: bool):
        self.path = path
        self.nats = nats
        self._fh = None

    def __enter__(self):
        self._fh = open(self.path, "w", newline="\n") if self.path else sys.stdout
        return self

    def __exit__(self, *exc):
        if self.path and self._fh is not None:
            self._fh.close()
        return False

    def row(self, cells: Sequence[object]) -> None:
        self._fh.write(",".join(_fmt(c) for c in cells) + "\n")

    def rate(self, bits: Optional[float]) -> Optional[float]:
        if bits is None:
            return None
        return bits * LN2 if self.nats else bits


def _rate_header(nats: bool) -> str:
    return "value_nats" if nats else "value_bits"


def _parse_fading(text: str, dedupe: bool) -> FadingSet:
    parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
    return FadingSet.from_iterable((float(p) for p in parts), dedupe=dedupe)


def _optimizer_text(state) -> str:
    if not state:
        return ""
    return ";".join(f"{k}={_fmt(v)}" for k, v in state.items() if not isinstance(v, tuple))


# ---------------------------------------------------------------------------
# bounds2


def _cmd_bounds2(args) -> int:
    inst = TwoFadingInstance(args.power, args.a1, args.a2, state_power=args.state_power)
    report = gap2(inst)
    a = inst.effective[1]
    rows = [
        ("carbon_outer", carbon_outer(inst.power, a), "reference model at a=a2"),
        ("carbon_inner", carbon_inner(inst.power, a), "reference model at a=a2"),
        ("outer2_numeric", outer2_numeric(inst), ""),
        ("outer2_closed", report.outer, f"case={report.case}"),
        ("inner2_closed", report.inner, ""),
    ]
    with _Output(args.out, args.nats) as out:
        out.row(("P", "a1", "a2", "bound", _rate_header(args.nats), "optimizer", "notes"))
        for name, bound, notes in rows:
            out.row(
                (
                    inst.power,
                    inst.a1,
                    inst.a2,
                    name,
                    out.rate(bound.value),
                    _optimizer_text(bound.optimizer_state),
                    notes,
                )
            )
        gap_notes = f"bound={_fmt(out.rate(report.bound))};case={report.case}"
        if report.case_bound is not None:
            gap_notes += f";case_bound={_fmt(out.rate(report.case_bound))}"
        if report.small_spread:
            gap_notes += ";small-spread"
        out.row(
            (inst.power, inst.a1, inst.a2, "gap2", out.rate(report.realized_gap), "", gap_notes)
        )
    return 0


# ---------------------------------------------------------------------------
# boundsM


def _cmd_boundsm(args) -> int:
    fading = _parse_fading(args.fading, args.dedupe)
    inst = MFadingInstance(args.power, fading, variant=args.variant)
    fading_text = ":".join(_fmt(v) for v in fading.values)
    rows: list[tuple[str, Optional[float], str, str]] = []

    strong = inst.strong()
    rows.append(("is_strong_fading", None, "true" if strong else "false", f"variant={args.variant}"))
    if strong:
        outer = strong_fading_outer(inst)
        gap = strong_fading_gap(inst)
        rows.append(("strong_fading_outer", outer.value, "ok", ""))
    inner = time_sharing_inner(inst)
    rows.insert(1, ("time_sharing_inner", inner.value, "ok", ""))
    if strong:
        rows.append(
            (
                "strong_fading_gap",
                gap.realized_gap,
                "ok",
                f"bound={_fmt(gap.bound)};exact={str(gap.exact).lower()}",
            )
        )
    else:
        rows.append(("strong_fading_outer", None, "regime-violation", "set is not strong fading"))
        rows.append(("strong_fading_gap", None, "regime-violation", "set is not strong fading"))
    try:
        sub = subset_outer(inst)
        k = sub.optimizer_state["K"]
        subset_text = ":".join(_fmt(v) for v in sub.optimizer_state["subset"])
        rows.append(("subset_outer", sub.value, "ok", f"K={k};subset={subset_text}"))
    except DirtyPaperError as exc:
        rows.append(("subset_outer", None, "precondition-violation", str(exc)))

    with _Output(args.out, args.nats) as out:
        out.row(("P", "fading", "bound", _rate_header(args.nats), "status", "notes"))
        for name, value, status, notes in rows:
            out.row((inst.power, fading_text, name, out.rate(value), status, notes))
    return 0


# ---------------------------------------------------------------------------
# simulate


def _scheme_from_args(args, fading: FadingSet) -> SchemeConfig:
    kind = args.scheme
    if kind == "tin":
        return SchemeConfig.tin()
    if kind == "costa-matched":
        if args.target is None:
            raise DirtyPaperError("costa-matched requires --target")
        return SchemeConfig.costa_matched(args.target)
    if kind == "costa-average":
        return SchemeConfig.costa_average()
    if kind == "costa-timeshare":
        return SchemeConfig.costa_timeshare()
    if kind == "two-codeword":
        if args.beta is None:
            raise DirtyPaperError("two-codeword requires --beta")
        return SchemeConfig.two_codeword(args.beta)
    raise DirtyPaperError(f"unknown scheme {kind!r}")


def _cmd_simulate(args) -> int:
    fading = _parse_fading(args.fading, args.dedupe)
    params = ChannelParams(power=args.power, fading=fading)
    cfg = _scheme_from_args(args, fading)
    est = simulate(params, cfg, args.samples, args.seed)
    with _Output(args.out, args.nats) as out:
        out.row(("scheme", "receiver", "rate_bits" if not args.nats else "rate_nats", "stderr", "N", "seed"))
        for a, rate, se in zip(est.receivers, est.rates, est.stderrs):
            out.row((est.scheme, a, out.rate(rate), out.rate(se), est.n_samples, est.seed))
        out.row(
            (
                est.scheme,
                "compound",
                out.rate(est.compound_rate),
                out.rate(est.compound_stderr),
                est.n_samples,
                est.seed,
            )
        )
    return 0


# ---------------------------------------------------------------------------
# sweep


class SweepSpecError(DirtyPaperError):
    pass


_SWEEP_PARAMS = ("P", "a1", "a2", "fading")
_AXIS_PARAMS = ("P", "a1", "a2")


def _selectables() -> dict[str, Callable[[dict], Optional[float]]]:
    def two(fn):
        def run(params):
            inst = TwoFadingInstance(params["P"], params.get("a1", 0.0), params["a2"])
            return fn(inst)

        return run

    def m_bound(fn):
        def run(params):
            fading = params.get("fading")
            if fading is None:
                raise SweepSpecError("selection requires fixed.fading")
            return fn(MFadingInstance(params["P"], fading))

        return run

    return {
        "carbon_outer": lambda p: carbon_outer(p["P"], p["a2"]).value,
        "carbon_inner": lambda p: carbon_inner(p["P"], p["a2"]).value,
        "outer2_numeric": two(lambda i: outer2_numeric(i).value),
        "outer2_closed": two(lambda i: outer2_closed(i).value),
        "inner2_closed": two(lambda i: inner2_closed(i).value),
        "gap2": two(lambda i: gap2(i).realized_gap),
        "gap2_bound": two(lambda i: gap2(i).bound),
        "time_sharing_inner": m_bound(lambda i: time_sharing_inner(i).value),
        "strong_fading_outer": m_bound(lambda i: strong_fading_outer(i).value),
        "subset_outer": m_bound(lambda i: subset_outer(i).value),
        "costa_gap_bound": lambda p: costa_small_spread_gap(
            p["P"], p["fading"] if p.get("fading") else FadingSet((p["a1"], p["a2"]))
        ).gap_bound,
    }


def _parse_sweep_spec(path: str):
    axes: list[tuple[str, list[float]]] = []
    fixed: dict[str, object] = {}
    select: list[str] = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SweepSpecError(f"line {lineno}: expected key = value")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key.startswith("axis."):
                name = key[5:]
                if name not in _AXIS_PARAMS:
                    raise SweepSpecError(f"line {lineno}: unknown axis parameter {name!r}")
                parts = [p.strip() for p in value.split(",")]
                if len(parts) != 4:
                    raise SweepSpecError(f"line {lineno}: axis needs min,max,count,lin|log")
                try:
                    lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
                except ValueError:
                    raise SweepSpecError(f"line {lineno}: bad axis numbers") from None
                spacing = parts[3]
                if count < 1 or (count > 1 and not hi > lo):
                    raise SweepSpecError(f"line {lineno}: need count >= 1 and min < max")
                if spacing == "lin":
                    pts = [lo + (hi - lo) * i / max(count - 1, 1) for i in range(count)]
                elif spacing == "log":
                    if lo <= 0:
                        raise SweepSpecError(f"line {lineno}: log axis needs min > 0")
                    ratio = (hi / lo) ** (1.0 / max(count - 1, 1))
                    pts = [lo * ratio**i for i in range(count)]
                else:
                    raise SweepSpecError(f"line {lineno}: spacing must be lin or log")
                axes.append((name, pts))
            elif key.startswith("fixed."):
                name = key[6:]
                if name not in _SWEEP_PARAMS:
                    raise SweepSpecError(f"line {lineno}: unknown parameter {name!r}")
                if name == "fading":
                    try:
                        fixed[name] = _parse_fading(value.replace(":", ","), dedupe=False)
                    except DirtyPaperError as exc:
                        raise SweepSpecError(f"line {lineno}: {exc}") from None
                else:
                    try:
                        fixed[name] = float(value)
                    except ValueError:
                        raise SweepSpecError(f"line {lineno}: bad number {value!r}") from None
            elif key == "select":
                select = [s.strip() for s in value.split(",") if s.strip()]
            else:
                raise SweepSpecError(f"line {lineno}: unknown key {key!r}")
    if not select:
        raise SweepSpecError("spec selects no bounds (missing select =)")
    unknown = [s for s in select if s not in _selectables()]
    if unknown:
        raise SweepSpecError(f"unknown selection(s): {', '.join(unknown)}")
    return axes, fixed, select


def _cmd_sweep(args) -> int:
    axes, fixed, select = _parse_sweep_spec(args.spec)
    evaluators = _selectables()
    axis_names = [name for name, _ in axes]
    cells = list(itertools.product(*(pts for _, pts in axes))) or [()]

    def cell_params(values):
        params = dict(fixed)
        params.update(dict(zip(axis_names, values)))
        return params

    def run_cell(values):
        params = cell_params(values)
        return [(name, evaluators[name](params)) for name in select]

    threads = max(1, int(os.environ.get("DPC_THREADS", "4")))
    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(run_cell, cells))

    with _Output(args.out, args.nats) as out:
        out.row(("P", "a1", "a2", "fading", "bound", _rate_header(args.nats)))
        for values, rows in zip(cells, results):
            params = cell_params(values)
            fading = params.get("fading")
            fading_text = ":".join(_fmt(v) for v in fading.values) if fading else ""
            for name, value in rows:
                out.row(
                    (
                        params.get("P"),
                        params.get("a1"),
                        params.get("a2"),
                        fading_text,
                        name,
                        out.rate(value),
                    )
                )
    return 0


# ---------------------------------------------------------------------------
# verify


def _cmd_verify(args) -> int:
    if args.suite not in SUITES:
        print(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)}", file=sys.stderr)
        return 2
    kwargs = {}
    if args.grid is not None:
        kwargs["grid"] = args.grid
    if args.m is not None:
        kwargs["m_max"] = args.m
    if args.tolerance is not None:
        kwargs["tolerance"] = args.tolerance
    try:
        checks = SUITES[args.suite](**kwargs)
    except TypeError as exc:
        print(f"suite {args.suite!r} does not accept those options: {exc}", file=sys.stderr)
        return 2
    all_pass = True
    for check in checks:
        status = "pass" if check.passed else "FAIL"
        detail = f"  {check.detail}" if check.detail else ""
        print(f"[{status}] {args.suite}:{check.name} worst_slack={_fmt(check.slack)}{detail}")
        all_pass = all_pass and check.passed
    print(f"{args.suite}: {'all checks passed' if all_pass else 'FAILURES'}")
    return 0 if all_pass else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dirtypaper",
        description="Capacity bounds for the dirty paper channel with fading dirt",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", help="write CSV to FILE instead of standard output")
        p.add_argument("--nats", action="store_true", help="report rates in nats")

    p2 = sub.add_parser("bounds2", help="two-fading-value bounds")
    p2.add_argument("--power", type=float, required=True)
    p2.add_argument("--a1", type=float, required=True)
    p2.add_argument("--a2", type=float, required=True)
    p2.add_argument("--state-power", type=float, default=1.0)
    common(p2)
    p2.set_defaults(func=_cmd_bounds2)

    pm = sub.add_parser("boundsM", help="M-fading-value bounds")
    pm.add_argument("--power", type=float, required=True)
    pm.add_argument("--fading", required=True, help="comma-separated amplitudes")
    pm.add_argument("--variant", choices=("amplitude", "power"), default="amplitude")
    pm.add_argument("--dedupe", action="store_true", help="collapse duplicate fading values")
    common(pm)
    pm.set_defaults(func=_cmd_boundsm)

    ps = sub.add_parser("simulate", help="Monte Carlo rate estimation")
    ps.add_argument("--power", type=float, required=True)
    ps.add_argument("--fading", required=True)
    ps.add_argument("--scheme", choices=SCHEME_KINDS, required=True)
    ps.add_argument("--beta", type=float, default=None)
    ps.add_argument("--target", type=float, default=None)
    ps.add_argument("--samples", type=int, default=1_000_000)
    ps.add_argument("--seed", type=int, default=0)
    ps.add_argument("--dedupe", action="store_true")
    common(ps)
    ps.set_defaults(func=_cmd_simulate)

    pw = sub.add_parser("sweep", help="axis sweep from a spec file")
    pw.add_argument("spec", help="sweep spec path (axis./fixed./select grammar)")
    common(pw)
    pw.set_defaults(func=_cmd_sweep)

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("suite")
    pv.add_argument("--grid", type=int, default=None, help="grid density where applicable")
    pv.add_argument("--M", dest="m", type=int, default=None, help="largest M for proofterms")
    pv.add_argument("--tolerance", type=float, default=None)
    pv.set_defaults(func=_cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SweepSpecError as exc:
        print(f"sweep spec error: {exc}", file=sys.stderr)
        return 2
    except RegimeViolationError as exc:
        print(f"regime violation: {exc}", file=sys.stderr)
        return 2
    except DirtyPaperError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
