import math

from relcost.protocols import (ACK, HBMSG, MSG, REQ, AckingReceiver,
                               DelayedAckReceiver, HeartbeatSender,
                               ReceiverDrivenReceiver, ReceiverDrivenSender,
                               SenderDrivenSender, TrivialMachine,
                               pathological, receiver_driven, sender_driven,
                               srhb_pair, trivial)


def drive(machine, script):
    """Apply (method, args) steps; return the flat list of emitted kinds."""
    out = []
    for name, *args in script:
        out += getattr(machine, name)(*args)
    return out


def test_trivial_never_reacts():
    m, r = trivial()
    script = [("on_start", 0)] + [("on_deliver", t, k)
                                  for t in range(5) for k in (MSG, ACK, REQ, HBMSG)]
    script += [("on_tick", t) for t in range(2000)]
    assert drive(m, script) == []
    assert not r.finished
    assert m.inert(True)


def test_sender_driven_cadence_and_stop():
    m = SenderDrivenSender(2)
    sends = [t for t in range(10) if drive(m, [("on_tick", t)])]
    assert sends == [0, 2, 4, 6, 8]
    m.on_deliver(10, ACK)
    assert m.on_tick(10) == []
    assert m.on_tick(12) == []
    assert m.inert(True)


def test_acking_receiver_finishes_once_and_keeps_acking():
    r = AckingReceiver()
    assert r.on_deliver(3, MSG) == [ACK]
    assert r.finished
    # duplicates after finishing are still acknowledged; finish is monotone
    assert r.on_deliver(5, MSG) == [ACK]
    assert r.finished
    assert r.on_deliver(6, HBMSG) == []


def test_receiver_driven_pair():
    snd, rcv = receiver_driven(2)
    assert rcv.on_tick(0) == [REQ]
    assert rcv.on_tick(1) == []
    assert rcv.on_tick(2) == [REQ]
    assert snd.on_deliver(3, REQ) == [MSG]
    rcv.on_deliver(6, MSG)
    assert rcv.finished
    assert rcv.on_tick(6) == []
    assert rcv.inert(True)
    # the responder answers every request, even late ones
    assert snd.on_deliver(9, REQ) == [MSG]


def test_srhb_sender_triggers_on_heartbeats_until_acked():
    s, r = srhb_pair()
    assert s.on_deliver(4, HBMSG) == [MSG]
    assert s.on_deliver(7, HBMSG) == [MSG]
    # ack delivered before the heartbeat on the same tick: loop guard wins
    s.on_deliver(10, ACK)
    assert s.on_deliver(10, HBMSG) == []
    assert s.inert(True)
    assert r.on_deliver(8, MSG) == [ACK]


def test_srhb_sender_inert_without_future_heartbeats():
    s, _ = srhb_pair()
    assert not s.inert(True)
    assert s.inert(False)


def test_pathological_kth_ack_delay():
    _, r = pathological(2.5)
    r.on_deliver(3, MSG)
    r.on_deliver(4, MSG)
    r.on_deliver(4, MSG)  # duplicates count: every receipt increments k
    # k-th ack fires ceil(2.5**k) after the k-th receipt
    assert r.pending == {3 + 3: 1, 4 + 7: 1, 4 + math.ceil(2.5 ** 3): 1}
    assert r.on_tick(6) == [ACK]
    assert r.on_tick(7) == []
    assert not r.inert(True)
    assert r.on_tick(11) == [ACK]
    assert r.on_tick(4 + math.ceil(2.5 ** 3)) == [ACK]
    assert r.inert(True)


def test_pathological_sender_has_unit_period():
    s, _ = pathological(3.0)
    assert [t for t in range(4) if s.on_tick(t)] == [0, 1, 2, 3]


def test_machines_are_deterministic():
    script = ([("on_start", 0)]
              + [("on_tick", t) for t in range(6)]
              + [("on_deliver", 6, HBMSG), ("on_deliver", 7, MSG),
                 ("on_deliver", 8, ACK), ("on_tick", 9)])
    for make in (lambda: sender_driven(2)[0], lambda: srhb_pair()[0],
                 lambda: receiver_driven(3)[1], lambda: pathological(2.0)[1],
                 lambda: TrivialMachine()):
        a = drive(make(), list(script))
        b = drive(make(), list(script))
        assert a == b


def test_no_machine_ever_emits_heartbeats():
    script = ([("on_start", 0)]
              + [("on_deliver", t, k) for t in range(8)
                 for k in (MSG, ACK, REQ, HBMSG)]
              + [("on_tick", t) for t in range(40)])
    for make in (lambda: sender_driven(1)[0], lambda: sender_driven(1)[1],
                 lambda: receiver_driven(2)[0], lambda: receiver_driven(2)[1],
                 lambda: srhb_pair()[0], lambda: srhb_pair()[1],
                 lambda: pathological(1.5)[0], lambda: pathological(1.5)[1],
                 lambda: TrivialMachine()):
        assert HBMSG not in drive(make(), list(script))
