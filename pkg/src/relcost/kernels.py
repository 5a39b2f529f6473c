"""Hot simulation kernels: tick loops for single and repeated invocations.

The functions here are written so the exact same source runs in two modes:

* compiled with numba ``@njit`` (the default when numba is importable), or
* as plain Python over numpy uint64 scalars, selected by setting the
  environment variable ``RELCOST_NO_NUMBA=1`` before import.

Both modes produce bit-identical results because all randomness flows through
one explicit splitmix64 stream (no numpy/numba RNG state involved) and all
floating point work uses the same float64 operations.  ``benchmarks/`` holds
a script that times the two modes against each other.

Random draw discipline (fixed; the pure-Python reference engine follows it):

* single mode:   [lifetime draws p, q] then per tick t: p's protocol send
  coins, p's heartbeat coin, q's protocol send coins, q's heartbeat coin.
  A coin is drawn exactly when a send happens.
* repeated mode: [lifetime draws] [all p heartbeat coins] [all q heartbeat
  coins] [invocation coins, tick-ordered, p before q] [per-invocation loss
  coins, invocation id order].

Crash/delivery ordering within a tick: deliveries happen first (a process
crashing at tick t still has messages delivered to it at t but takes no
action), then crashes, then the live processes act.
"""

import math
import os

import numpy as np

NUMBA_DISABLED = os.environ.get("RELCOST_NO_NUMBA", "0") == "1"

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a hard dep, but stay usable
    _numba = None

NUMBA_ENABLED = (_numba is not None) and not NUMBA_DISABLED

if NUMBA_ENABLED:
    jitted = _numba.njit(cache=True, nogil=True)
else:
    def jitted(f):
        return f

_MASK = 0xFFFFFFFFFFFFFFFF
_GOLDEN = 0x9E3779B97F4A7C15

# protocol codes, kept in sync with model.PROTOCOL_NAMES
_TRIVIAL = 0
_SENDER = 1
_RECEIVER = 2
_SRHB = 3
_PATHOLOGICAL = 4

_NEVER = 1 << 60  # internal "never happens" tick, beyond any horizon


def derive_run_seed(master: int, index: int) -> int:
    """Per-run substream seed: splitmix64 jump+finalize over python ints.

    Pure python on purpose: exact, warning-free, and usable to derive seeds
    for any backend mode.
    """
    z = (int(master) + (int(index) + 1) * 0x9E3779B97F4A7C15) & _MASK
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & _MASK
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & _MASK
    z ^= z >> 31
    return z


def make_seeds(master: int, start: int, count: int) -> np.ndarray:
    """uint64 seed array for runs [start, start+count) of a master seed."""
    return np.array([derive_run_seed(master, start + i) for i in range(count)],
                    dtype=np.uint64)


def seed_state(seed: int) -> np.uint64:
    return np.uint64(int(seed) & _MASK)


@jitted
def _next_unit(state):
    # splitmix64 step + finalizer; returns (new_state, unit float in [0, 1))
    s = (state + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = s
    z ^= z >> 30
    z = (z * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z ^= z >> 27
    z = (z * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    z ^= z >> 31
    return s, (z >> 11) * 1.1102230246251565e-16


@jitted
def _sample_lifetime(state, alpha, beta):
    # -1 encodes "never crashes"; otherwise geometric on {0, 1, ...} with
    # per-tick rate beta (crash at tick 0 is possible).
    state, u = _next_unit(state)
    if u < alpha:
        return state, -1
    if beta >= 1.0:
        return state, 0
    state, u2 = _next_unit(state)
    t = int(math.floor(math.log1p(-u2) / math.log1p(-beta)))
    return state, t


@jitted
def _single_run(proto, gamma, tau, delta, ack_base, horizon, state,
                t_p, t_q, force_loss_until,
                msg_cal, ack_cal, req_cal, hbp_cal, fire_cal):
    """One seeded single-invocation run; returns summary metrics.

    t_p/t_q are crash ticks already capped to horizon+1 ("never within
    window").  Calendars are caller-owned scratch, zero on entry; the run
    re-zeroes exactly the slots it wrote before returning.

    Returns (t_f, n_send, n_hb, quiesce_t, active) where t_f is horizon+1
    when the receiver never finishes in-window, quiesce_t is -1 when the run
    is still active at the horizon, and n_send excludes heartbeats.
    """
    big = horizon + 1
    ack_seen = False
    finished = False
    t_f = big
    n_send = 0
    n_hb = 0
    inflight_msg = 0
    inflight_req = 0
    inflight_hb_p = 0
    pending_fire = 0
    far_pending = 0
    k_rx = 0
    quiesce_t = -1
    used_end = -1
    log_ab = 0.0
    log_window = 0.0
    if proto == _PATHOLOGICAL:
        log_ab = math.log(ack_base)
        log_window = math.log(float(horizon + 1))

    for t in range(horizon):
        d_msg = msg_cal[t]
        d_ack = ack_cal[t]
        d_req = req_cal[t]
        d_hbp = hbp_cal[t]
        inflight_msg -= d_msg
        inflight_req -= d_req
        inflight_hb_p -= d_hbp

        # --- process p acts (sender side except in the receiver-driven case)
        if t < t_p:
            if d_ack > 0 and (proto == _SENDER or proto == _SRHB or proto == _PATHOLOGICAL):
                ack_seen = True
            if proto == _SENDER:
                if not ack_seen and t % delta == 0:
                    state, u = _next_unit(state)
                    n_send += 1
                    if not (t < force_loss_until or u < gamma):
                        msg_cal[t + tau] += 1
                        inflight_msg += 1
                        if t + tau > used_end:
                            used_end = t + tau
            elif proto == _PATHOLOGICAL:
                if not ack_seen:
                    state, u = _next_unit(state)
                    n_send += 1
                    if not (t < force_loss_until or u < gamma):
                        msg_cal[t + tau] += 1
                        inflight_msg += 1
                        if t + tau > used_end:
                            used_end = t + tau
            elif proto == _SRHB:
                if not ack_seen and d_hbp > 0:
                    for _ in range(d_hbp):
                        state, u = _next_unit(state)
                        n_send += 1
                        if not (t < force_loss_until or u < gamma):
                            msg_cal[t + tau] += 1
                            inflight_msg += 1
                            if t + tau > used_end:
                                used_end = t + tau
            elif proto == _RECEIVER:
                if d_req > 0:
                    for _ in range(d_req):
                        state, u = _next_unit(state)
                        n_send += 1
                        if not (t < force_loss_until or u < gamma):
                            msg_cal[t + tau] += 1
                            inflight_msg += 1
                            if t + tau > used_end:
                                used_end = t + tau
            # p's heartbeat layer (to q; no protocol listens to it in single mode)
            if t % delta == 0:
                state, u = _next_unit(state)
                n_hb += 1

        # --- process q acts
        if t < t_q:
            if proto == _SENDER or proto == _SRHB:
                if d_msg > 0:
                    if not finished:
                        finished = True
                        t_f = t
                    for _ in range(d_msg):
                        state, u = _next_unit(state)
                        n_send += 1
                        if not (t < force_loss_until or u < gamma):
                            ack_cal[t + tau] += 1
                            if t + tau > used_end:
                                used_end = t + tau
            elif proto == _RECEIVER:
                if d_msg > 0 and not finished:
                    finished = True
                    t_f = t
                if not finished and t % delta == 0:
                    state, u = _next_unit(state)
                    n_send += 1
                    if not (t < force_loss_until or u < gamma):
                        req_cal[t + tau] += 1
                        inflight_req += 1
                        if t + tau > used_end:
                            used_end = t + tau
            elif proto == _PATHOLOGICAL:
                if d_msg > 0:
                    if not finished:
                        finished = True
                        t_f = t
                    for _ in range(d_msg):
                        k_rx += 1
                        if k_rx * log_ab > log_window:
                            far_pending += 1
                        else:
                            ft = t + int(math.ceil(ack_base ** k_rx))
                            if ft <= horizon - 1:
                                fire_cal[ft] += 1
                                pending_fire += 1
                                if ft > used_end:
                                    used_end = ft
                            else:
                                far_pending += 1
                if fire_cal[t] > 0:
                    for _ in range(fire_cal[t]):
                        state, u = _next_unit(state)
                        n_send += 1
                        pending_fire -= 1
                        if not (t < force_loss_until or u < gamma):
                            ack_cal[t + tau] += 1
                            if t + tau > used_end:
                                used_end = t + tau
            # q's heartbeat layer (to p; drives the srhb sender)
            if t % delta == 0:
                state, u = _next_unit(state)
                n_hb += 1
                if not (t < force_loss_until or u < gamma):
                    hbp_cal[t + tau] += 1
                    inflight_hb_p += 1
                    if t + tau > used_end:
                        used_end = t + tau

        # --- quiescence: no further non-heartbeat send can ever happen
        p_dead = t >= t_p
        q_dead = t >= t_q
        if proto == _TRIVIAL:
            quiescent = True
        elif proto == _SENDER:
            quiescent = (ack_seen or p_dead) and (inflight_msg == 0 or q_dead)
        elif proto == _RECEIVER:
            quiescent = (finished or q_dead) and (inflight_req == 0 or p_dead)
        elif proto == _SRHB:
            p_can = (not p_dead) and (not ack_seen) and ((not q_dead) or inflight_hb_p > 0)
            quiescent = (not p_can) and (inflight_msg == 0 or q_dead)
        else:
            quiescent = ((ack_seen or p_dead)
                         and (inflight_msg == 0 or q_dead)
                         and (pending_fire + far_pending == 0 or q_dead))
        if quiescent:
            quiesce_t = t
            break

    # scrub the scratch calendars for the next run
    for i in range(used_end + 1):
        msg_cal[i] = 0
        ack_cal[i] = 0
        req_cal[i] = 0
        hbp_cal[i] = 0
        fire_cal[i] = 0

    active = 1 if quiesce_t < 0 else 0
    return t_f, n_send, n_hb, quiesce_t, active


@jitted
def _single_batch(proto, alpha_p, alpha_q, beta_p, beta_q, gamma, tau, delta,
                  ack_base, horizon, seeds, force_tp, force_tq, force_loss_until,
                  out_tp, out_tq, out_tf, out_nsend, out_nhb, out_active, out_quiesce):
    cal_len = horizon + tau + 2
    msg_cal = np.zeros(cal_len, np.int32)
    ack_cal = np.zeros(cal_len, np.int32)
    req_cal = np.zeros(cal_len, np.int32)
    hbp_cal = np.zeros(cal_len, np.int32)
    fire_cal = np.zeros(cal_len, np.int32)
    big = horizon + 1
    for r in range(seeds.shape[0]):
        state = seeds[r]
        if force_tp >= 0:
            tp = force_tp if force_tp < big else big
        else:
            state, raw = _sample_lifetime(state, alpha_p, beta_p)
            tp = big if (raw < 0 or raw > horizon) else raw
        if force_tq >= 0:
            tq = force_tq if force_tq < big else big
        else:
            state, raw = _sample_lifetime(state, alpha_q, beta_q)
            tq = big if (raw < 0 or raw > horizon) else raw
        t_f, n_send, n_hb, quiesce_t, active = _single_run(
            proto, gamma, tau, delta, ack_base, horizon, state, tp, tq,
            force_loss_until, msg_cal, ack_cal, req_cal, hbp_cal, fire_cal)
        out_tp[r] = tp
        out_tq[r] = tq
        out_tf[r] = t_f
        out_nsend[r] = n_send
        out_nhb[r] = n_hb
        out_active[r] = active
        out_quiesce[r] = quiesce_t


@jitted
def _hb_upto(t, t_x, delta, horizon):
    # heartbeat sends of a process with crash tick t_x, counted up to time t
    m = t
    if t_x - 1 < m:
        m = t_x - 1
    if horizon - 1 < m:
        m = horizon - 1
    if m < 0:
        return 0
    return m // delta + 1


@jitted
def _repeated_run(gamma, tau, delta, sigma, horizon, state, t_p, t_q,
                  hb_in_p, hb_in_q,
                  inv_start, inv_sender, inv_nsend, inv_wait, inv_finish, inv_complete):
    """One seeded repeated-mode run; fills the per-invocation arrays.

    t_p/t_q are raw crash ticks (huge value = never).  Both processes share
    one heartbeat stream per direction; each invocation is walked
    independently against its sender's inbound heartbeat arrivals.

    Returns (n_inv, hb_count_p, hb_count_q).
    ``inv_complete[i]`` is the completion tick (last send, or the start tick
    for invocations that never trigger a send), or -1 when activity past the
    horizon cannot be ruled out.
    """
    for i in range(horizon):
        hb_in_p[i] = 0
        hb_in_q[i] = 0

    # heartbeat stream p -> q
    hb_count_p = 0
    last_trigger_q = -1
    t = 0
    while t < horizon and t < t_p:
        state, u = _next_unit(state)
        hb_count_p += 1
        if not (u < gamma):
            arr = t + tau
            if arr < t_q and arr > last_trigger_q:
                last_trigger_q = arr
            if arr < horizon:
                hb_in_q[arr] = 1
        t += delta

    # heartbeat stream q -> p
    hb_count_q = 0
    last_trigger_p = -1
    t = 0
    while t < horizon and t < t_q:
        state, u = _next_unit(state)
        hb_count_q += 1
        if not (u < gamma):
            arr = t + tau
            if arr < t_p and arr > last_trigger_p:
                last_trigger_p = arr
            if arr < horizon:
                hb_in_p[arr] = 1
        t += delta

    # invocation arrivals: Bernoulli(sigma) per live process per tick,
    # drawn before the protocol step so a same-tick heartbeat can trigger
    # the new invocation immediately
    n_inv = 0
    t = 0
    while t < horizon and (t < t_p or t < t_q):
        if t < t_p:
            state, u = _next_unit(state)
            if u < sigma:
                inv_start[n_inv] = t
                inv_sender[n_inv] = 0
                n_inv += 1
        if t < t_q:
            state, u = _next_unit(state)
            if u < sigma:
                inv_start[n_inv] = t
                inv_sender[n_inv] = 1
                n_inv += 1
        t += 1

    for i in range(n_inv):
        s = inv_start[i]
        if inv_sender[i] == 0:
            t_snd = t_p
            t_rcv = t_q
            last_trig = last_trigger_p
        else:
            t_snd = t_q
            t_rcv = t_p
            last_trig = last_trigger_q
        stop = _NEVER
        msgs = 0
        acks = 0
        last_send = -1
        finish = -1
        pending = False
        u_t = s
        while u_t < horizon and u_t < t_snd and u_t < stop:
            trig = hb_in_p[u_t] if inv_sender[i] == 0 else hb_in_q[u_t]
            if trig == 1:
                msgs += 1
                if u_t > last_send:
                    last_send = u_t
                state, u = _next_unit(state)
                if not (u < gamma):
                    arr = u_t + tau
                    if arr <= t_rcv:
                        # delivered (receiver up at the delivery step)
                        if arr > horizon - 1:
                            if arr < t_rcv:
                                pending = True  # would be acknowledged past the horizon
                        elif arr < t_rcv:
                            if finish < 0:
                                finish = arr
                            acks += 1
                            if arr > last_send:
                                last_send = arr
                            state, u2 = _next_unit(state)
                            if not (u2 < gamma):
                                arr2 = arr + tau
                                if arr2 <= horizon - 1 and arr2 < stop:
                                    stop = arr2
            u_t += 1

        sender_alive_end = t_snd > horizon - 1
        sender_stopped = (stop <= horizon - 1) or (not sender_alive_end)
        future_trigger = (t_rcv > horizon - 1) or (last_trig > horizon - 1)
        incomplete = pending or ((not sender_stopped) and future_trigger)

        inv_nsend[i] = msgs + acks
        inv_finish[i] = finish
        if incomplete:
            inv_complete[i] = -1
        else:
            inv_complete[i] = last_send if last_send >= 0 else s
        w_min = t_p if t_p < t_q else t_q
        if finish >= 0 and finish < w_min:
            w_min = finish
        if horizon < w_min:
            w_min = horizon
        w = w_min - s
        if w < 0:
            w = 0
        inv_wait[i] = w

    return n_inv, hb_count_p, hb_count_q


@jitted
def _repeated_reduce(n_inv, inv_nsend, inv_wait, inv_complete,
                     t_p, t_q, delta, horizon, c_send, c_wait,
                     time_buf, cost_buf):
    """Average-cost summary of one repeated run.

    Returns (n_complete, cost_completed, hb_total, ratio_at_horizon,
    running_sup).  The running sup is evaluated at every integer time where
    the ratio can attain its maximum: just before and at each completion
    event, and at the horizon.
    """
    m = 0
    for i in range(n_inv):
        if inv_complete[i] >= 0:
            time_buf[m] = inv_complete[i]
            cost_buf[m] = inv_nsend[i] * c_send + inv_wait[i] * c_wait
            m += 1
    order = np.argsort(time_buf[:m])
    k_done = 0
    c_done = 0.0
    sup = 0.0
    j = 0
    while j < m:
        big_t = time_buf[order[j]]
        hb_before = _hb_upto(big_t - 1, t_p, delta, horizon) + _hb_upto(big_t - 1, t_q, delta, horizon)
        cand = (c_done + hb_before * c_send) / (k_done + 1)
        if cand > sup:
            sup = cand
        while j < m and time_buf[order[j]] == big_t:
            c_done += cost_buf[order[j]]
            k_done += 1
            j += 1
        hb_at = _hb_upto(big_t, t_p, delta, horizon) + _hb_upto(big_t, t_q, delta, horizon)
        cand = (c_done + hb_at * c_send) / (k_done + 1)
        if cand > sup:
            sup = cand
    hb_total = _hb_upto(horizon, t_p, delta, horizon) + _hb_upto(horizon, t_q, delta, horizon)
    ratio_h = (c_done + hb_total * c_send) / (k_done + 1)
    if ratio_h > sup:
        sup = ratio_h
    return k_done, c_done, hb_total, ratio_h, sup


@jitted
def _repeated_batch(alpha_p, alpha_q, beta_p, beta_q, gamma, tau, delta, sigma,
                    horizon, seeds, c_send, c_wait,
                    out_ratio, out_sup, out_ninv, out_ncomplete, out_nhb,
                    out_tp, out_tq):
    cap = 2 * horizon + 2
    hb_in_p = np.zeros(horizon, np.uint8)
    hb_in_q = np.zeros(horizon, np.uint8)
    inv_start = np.empty(cap, np.int64)
    inv_sender = np.empty(cap, np.int64)
    inv_nsend = np.empty(cap, np.int64)
    inv_wait = np.empty(cap, np.int64)
    inv_finish = np.empty(cap, np.int64)
    inv_complete = np.empty(cap, np.int64)
    time_buf = np.empty(cap, np.int64)
    cost_buf = np.empty(cap, np.float64)
    big = horizon + 1
    for r in range(seeds.shape[0]):
        state = seeds[r]
        state, raw = _sample_lifetime(state, alpha_p, beta_p)
        tp = _NEVER if raw < 0 else raw
        state, raw = _sample_lifetime(state, alpha_q, beta_q)
        tq = _NEVER if raw < 0 else raw
        n_inv, hb_p, hb_q = _repeated_run(
            gamma, tau, delta, sigma, horizon, state, tp, tq,
            hb_in_p, hb_in_q,
            inv_start, inv_sender, inv_nsend, inv_wait, inv_finish, inv_complete)
        n_complete, _c_done, _hb_tot, ratio_h, sup = _repeated_reduce(
            n_inv, inv_nsend, inv_wait, inv_complete,
            tp, tq, delta, horizon, c_send, c_wait, time_buf, cost_buf)
        out_ratio[r] = ratio_h
        out_sup[r] = sup
        out_ninv[r] = n_inv
        out_ncomplete[r] = n_complete
        out_nhb[r] = hb_p + hb_q
        out_tp[r] = tp if tp <= horizon else big
        out_tq[r] = tq if tq <= horizon else big


# ---------------------------------------------------------------------------
# python-side wrappers (the only entry points the rest of the package uses)

def next_unit(state):
    """Advance the shared splitmix64 stream; returns (state, float in [0,1)).

    State is re-coerced to uint64 on entry: compiled callees box their uint64
    returns as python ints, which must not be re-typed as int64 on the way
    back in.
    """
    with np.errstate(over="ignore"):
        return _next_unit(seed_state(state))


def sample_lifetime(state, alpha, beta):
    """Draw a crash tick (-1 = never) from the stream; returns (state, tick)."""
    with np.errstate(over="ignore"):
        return _sample_lifetime(seed_state(state), alpha, beta)


def single_batch(proto_code, params, horizon, seeds,
                 force_tp=-1, force_tq=-1, force_loss_until=0, ack_base=2.0):
    """Run a batch of independent single-invocation runs; returns metric arrays.

    Censoring conventions: t_p/t_q/t_f hold horizon+1 when the event does not
    occur within the window; ``active`` is 1 when the run was truncated while
    the protocol could still send.
    """
    n = seeds.shape[0]
    out_tp = np.empty(n, np.int64)
    out_tq = np.empty(n, np.int64)
    out_tf = np.empty(n, np.int64)
    out_nsend = np.empty(n, np.int64)
    out_nhb = np.empty(n, np.int64)
    out_active = np.empty(n, np.int64)
    out_quiesce = np.empty(n, np.int64)
    with np.errstate(over="ignore"):
        _single_batch(proto_code, params.alpha_p, params.alpha_q,
                      params.beta_p, params.beta_q, params.gamma,
                      int(params.tau), int(params.delta), float(ack_base),
                      int(horizon), seeds,
                      int(force_tp), int(force_tq), int(force_loss_until),
                      out_tp, out_tq, out_tf, out_nsend, out_nhb,
                      out_active, out_quiesce)
    return {
        "t_p": out_tp, "t_q": out_tq, "t_f": out_tf,
        "n_send": out_nsend, "n_hb": out_nhb,
        "active": out_active, "quiesce_t": out_quiesce,
    }


def repeated_batch(params, costs, horizon, seeds):
    """Run a batch of repeated-mode runs; returns per-run average-cost arrays."""
    n = seeds.shape[0]
    out = {
        "ratio": np.empty(n, np.float64),
        "sup": np.empty(n, np.float64),
        "n_inv": np.empty(n, np.int64),
        "n_complete": np.empty(n, np.int64),
        "n_hb": np.empty(n, np.int64),
        "t_p": np.empty(n, np.int64),
        "t_q": np.empty(n, np.int64),
    }
    with np.errstate(over="ignore"):
        _repeated_batch(params.alpha_p, params.alpha_q, params.beta_p,
                        params.beta_q, params.gamma, int(params.tau),
                        int(params.delta), params.sigma, int(horizon), seeds,
                        costs.c_send, costs.c_wait,
                        out["ratio"], out["sup"], out["n_inv"],
                        out["n_complete"], out["n_hb"], out["t_p"], out["t_q"])
    return out


def repeated_run_arrays(params, horizon, seed):
    """Single repeated-mode run with full per-invocation detail.

    Returns (n_inv, arrays dict, hb_count_p, hb_count_q, t_p, t_q) with the
    crash ticks capped at horizon+1.
    """
    cap = 2 * int(horizon) + 2
    hb_in_p = np.zeros(int(horizon), np.uint8)
    hb_in_q = np.zeros(int(horizon), np.uint8)
    arr = {
        "start": np.empty(cap, np.int64),
        "sender": np.empty(cap, np.int64),
        "n_send": np.empty(cap, np.int64),
        "wait": np.empty(cap, np.int64),
        "finish": np.empty(cap, np.int64),
        "complete_t": np.empty(cap, np.int64),
    }
    with np.errstate(over="ignore"):
        # re-coerce the stream state at every compiled-boundary crossing:
        # jitted callees box uint64 returns as python ints
        state, raw = _sample_lifetime(seed_state(seed), params.alpha_p, params.beta_p)
        tp = _NEVER if raw < 0 else raw
        state, raw = _sample_lifetime(seed_state(state), params.alpha_q, params.beta_q)
        tq = _NEVER if raw < 0 else raw
        n_inv, hb_p, hb_q = _repeated_run(
            params.gamma, int(params.tau), int(params.delta), params.sigma,
            int(horizon), seed_state(state), tp, tq, hb_in_p, hb_in_q,
            arr["start"], arr["sender"], arr["n_send"], arr["wait"],
            arr["finish"], arr["complete_t"])
    big = int(horizon) + 1
    arrays = {k: v[:n_inv].copy() for k, v in arr.items()}
    tp_out = tp if tp <= horizon else big
    tq_out = tq if tq <= horizon else big
    return n_inv, arrays, int(hb_p), int(hb_q), int(tp_out), int(tq_out)


def hb_sends_upto(t, t_x, delta, horizon):
    """Closed-form heartbeat send count of one process up to time t."""
    return int(_hb_upto(int(t), int(t_x), int(delta), int(horizon)))
