"""Random variables extracted from traces and the three cost functions.

Censoring convention: a quantity that cannot be determined from the simulated
window is reported as None rather than a number, and estimators must count
such runs instead of silently folding them into means.  The exponential cost
c1 is the one exception: a censored or infinite wait makes it the inf
sentinel, matching its role as an unbounded penalty.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

from .engine import RepeatedTrace, RunTrace
from .model import CostParams
from .protocols import HBMSG


@dataclass(frozen=True)
class CostBreakdown:
    num_sends: int | None     # protocol sends, heartbeats excluded
    wait: int | None          # receiver waiting time, crash-truncated
    c0: float | None          # linear cost
    c1: float | None          # exponential waiting penalty (may be inf)


@dataclass(frozen=True)
class AvgCostPoint:
    t: int
    c_total: float
    num_completed: int
    num_hb: int
    ratio: float              # c_total / (num_completed + 1)


def t_wait(trace: RunTrace) -> int | None:
    """Waiting time max(min(t_p, t_q, t_f), t_s) - t_s; None when every one
    of t_p, t_q, t_f lies beyond the horizon (censored)."""
    m = min(trace.t_p, trace.t_q, trace.t_f)
    if m > trace.horizon:
        return None
    return max(m, trace.t_s) - trace.t_s


def num_sends(trace: RunTrace) -> int | None:
    """Protocol send count (msg/ack/req; heartbeats excluded); None when the
    run was truncated while still active, since more sends could follow."""
    if trace.truncated:
        return None
    return sum(1 for r in trace.messages if r.kind != HBMSG)


def num_sends_truncated(trace: RunTrace) -> int:
    """Send count up to the horizon regardless of truncation (probe use)."""
    return sum(1 for r in trace.messages if r.kind != HBMSG)


def cost_c0(trace: RunTrace, costs: CostParams) -> float | None:
    s = num_sends(trace)
    w = t_wait(trace)
    if s is None or w is None:
        return None
    return s * costs.c_send + w * costs.c_wait


def cost_c1(trace: RunTrace, costs: CostParams) -> float:
    w = t_wait(trace)
    if w is None:
        return math.inf
    return costs.n_exp ** w


def breakdown(trace: RunTrace, costs: CostParams) -> CostBreakdown:
    return CostBreakdown(
        num_sends=num_sends(trace),
        wait=t_wait(trace),
        c0=cost_c0(trace, costs),
        c1=cost_c1(trace, costs),
    )


def _hb_send_times(crash_t: int, delta: int, horizon: int) -> list[int]:
    # a process sends heartbeats at local times 0, delta, ... while alive
    end = min(crash_t, horizon)
    return list(range(0, end, delta))


def avg_cost_series(trace: RepeatedTrace, costs: CostParams):
    """Average-cost-per-invocation series of a repeated run.

    c_total(t) sums the c0 of invocations completed by t plus the cost of
    every heartbeat sent by t; the ratio divides by (completions + 1) so the
    denominator is never zero.  One point per completion or heartbeat event.
    Returns (points, running_sup); the running sup is the finite-horizon
    stand-in for the limit-superior cost.
    """
    completions = sorted(
        (r.complete_t, r.n_send * costs.c_send + r.wait * costs.c_wait)
        for r in trace.invocations if r.complete_t >= 0
    )
    hb_times = sorted(
        _hb_send_times(trace.t_p, trace.delta, trace.horizon)
        + _hb_send_times(trace.t_q, trace.delta, trace.horizon)
    )
    event_times = sorted({t for t, _ in completions} | set(hb_times))
    points: list[AvgCostPoint] = []
    sup = 0.0
    ci = hi = 0
    c_done = 0.0
    k_done = 0
    n_hb = 0
    for t in event_times:
        while ci < len(completions) and completions[ci][0] <= t:
            c_done += completions[ci][1]
            k_done += 1
            ci += 1
        while hi < len(hb_times) and hb_times[hi] <= t:
            n_hb += 1
            hi += 1
        c_total = c_done + n_hb * costs.c_send
        ratio = c_total / (k_done + 1)
        if ratio > sup:
            sup = ratio
        points.append(AvgCostPoint(t=t, c_total=c_total, num_completed=k_done,
                                   num_hb=n_hb, ratio=ratio))
    return points, sup


def final_ratio(trace: RepeatedTrace, costs: CostParams) -> float:
    """Value of the average-cost ratio at the horizon."""
    points, _sup = avg_cost_series(trace, costs)
    if not points:
        return 0.0
    return points[-1].ratio


def series_to_csv(points, fh) -> None:
    """CSV emission, '.' decimal, stable column order."""
    fh.write("t,c_total,num_completed,num_hb,ratio\n")
    for p in points:
        fh.write(f"{p.t},{p.c_total!r},{p.num_completed},{p.num_hb},{p.ratio!r}\n")


def series_to_csv_text(points) -> str:
    buf = io.StringIO()
    series_to_csv(points, buf)
    return buf.getvalue()
