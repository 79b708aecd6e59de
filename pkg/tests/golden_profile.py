"""Golden flat-profile dataset and the brute-force fixture generator.

GOLDEN_ROWS holds the published reference profile cell-for-cell (names,
iteration counts, overloads, activity, session share, max/avg iteration time
and message tallies for a 18:50.691 session with a 1000 ms slice).

`synth_durations` reconstructs, for each row, an iteration duration multiset
that reproduces the row's aggregates exactly: one iteration at the maximum,
overload-1 iterations just above the slice, and the remaining activity spread
evenly below the slice. The construction is self-checking, so the snapshot it
feeds into the store/query pipeline is an independent oracle for the
aggregation rules.
"""
from __future__ import annotations

from pathlib import Path

from agentprof.model import (
    AgentDescriptor,
    Endpoint,
    FipaHeaders,
    IterationEvent,
    LifecycleEvent,
    MessageEvent,
    SCOPE_INTRA,
    SessionInfo,
)
from agentprof.store import write_snapshot

GOLDEN_SESSION_MS = 1_130_691  # 18:50.691
GOLDEN_ACTIVITY_MS = 629_164   # 10:29.164
GOLDEN_SLICE_MS = 1000
GOLDEN_MESSAGES = 1206

GOLDEN_HEADER_CELLS = {
    "Total Session Time": "18:50.691",
    "Total Activity": "10:29.164",
    "Messages Sent": "1206",
    "Messages Received": "1206",
    "Time Slice Duration": "1000 ms",
}

# name, T>0 iterations, overloads, activity, % session, max, average, sent, received
GOLDEN_ROWS = [
    ("agent001", 338, 22, "1:08.564", "10.90", "3.740", "0.202", 6, 57),
    ("agent009", 365, 21, "1:04.257", "10.21", "3.425", "0.176", 13, 77),
    ("agent004", 349, 22, "1:01.529", "9.78", "3.235", "0.176", 10, 69),
    ("agent014", 284, 14, "46.413", "7.38", "3.148", "0.163", 2, 36),
    ("agent003", 401, 13, "43.881", "6.97", "3.323", "0.109", 12, 76),
    ("agent006", 361, 12, "40.141", "6.38", "3.279", "0.111", 12, 73),
    ("agent005", 367, 12, "34.903", "5.55", "3.325", "0.095", 17, 76),
    ("agent013", 301, 9, "34.716", "5.52", "3.190", "0.115", 14, 71),
    ("agent007", 378, 11, "31.864", "5.06", "3.356", "0.084", 21, 71),
    ("agent008", 357, 7, "30.850", "4.90", "3.201", "0.086", 14, 72),
    ("agent010", 330, 8, "30.280", "4.81", "3.147", "0.091", 21, 81),
    ("agent015", 285, 9, "29.382", "4.67", "3.257", "0.103", 4, 42),
    ("agent002", 348, 8, "23.196", "3.69", "3.147", "0.066", 9, 70),
    ("agent011", 357, 5, "19.363", "3.08", "3.095", "0.054", 4, 39),
    ("agent012", 225, 3, "13.172", "2.09", "3.049", "0.058", 9, 41),
    ("master2", 901, 0, "6.681", "1.06", "0.183", "0.007", 504, 86),
    ("master1", 873, 0, "6.485", "1.03", "0.227", "0.007", 514, 82),
    ("agent024", 46, 2, "6.281", "1.00", "3.045", "0.136", 3, 7),
    ("agent019", 31, 1, "4.449", "0.71", "3.014", "0.143", 0, 5),
    ("agent026", 42, 1, "4.400", "0.70", "3.084", "0.104", 0, 4),
    ("agent030", 26, 1, "4.002", "0.64", "3.132", "0.153", 2, 8),
    ("agent017", 46, 1, "3.811", "0.61", "3.031", "0.082", 0, 3),
    ("agent025", 40, 1, "3.767", "0.60", "3.006", "0.094", 0, 3),
    ("agent027", 31, 1, "3.694", "0.59", "3.103", "0.119", 0, 2),
    ("agent018", 38, 1, "3.384", "0.54", "3.044", "0.089", 2, 7),
    ("agent020", 39, 0, "1.762", "0.28", "0.547", "0.045", 0, 3),
    ("agent022", 47, 0, "1.523", "0.24", "0.559", "0.032", 5, 13),
    ("agent021", 32, 0, "1.300", "0.21", "0.555", "0.040", 2, 7),
    ("agent016", 219, 0, "1.194", "0.19", "0.555", "0.005", 2, 6),
    ("agent029", 38, 0, "1.039", "0.17", "0.550", "0.027", 2, 8),
    ("agent028", 45, 0, "0.749", "0.12", "0.546", "0.016", 1, 4),
    ("agent032", 34, 0, "0.749", "0.12", "0.561", "0.022", 1, 4),
    ("agent031", 36, 0, "0.742", "0.12", "0.545", "0.020", 0, 2),
    ("agent023", 40, 0, "0.598", "0.10", "0.543", "0.014", 0, 1),
    ("agent033", 30, 0, "0.043", "0.01", "0.003", "0.001", 0, 0),
]


def ms_from_clock(text: str) -> int:
    """'1:08.564' or '46.413' -> milliseconds."""
    if ":" in text:
        minutes, rest = text.split(":")
        seconds, millis = rest.split(".")
        return int(minutes) * 60000 + int(seconds) * 1000 + int(millis)
    seconds, millis = text.split(".")
    return int(seconds) * 1000 + int(millis)


def synth_durations(
    count: int, overloads: int, activity_ms: int, max_ms: int, slice_ms: int
) -> list[int]:
    """A duration multiset with the given count/sum/max/overload aggregates."""
    if count == 0:
        assert activity_ms == 0 and overloads == 0 and max_ms == 0
        return []
    durations = [max_ms]
    if overloads > 0:
        assert max_ms > slice_ms, "max must itself be an overload"
        durations += [slice_ms + 1] * (overloads - 1)
    remaining = count - len(durations)
    budget = activity_ms - sum(durations)
    if remaining:
        cap = min(max_ms, slice_ms)
        base, extra = divmod(budget, remaining)
        assert 1 <= base and (base + 1 if extra else base) <= cap, "row not satisfiable"
        durations += [base + 1] * extra + [base] * (remaining - extra)
    # self-check: the construction must hit every aggregate exactly
    assert len(durations) == count
    assert sum(durations) == activity_ms
    assert max(durations) == max_ms
    assert sum(1 for d in durations if d > slice_ms) == overloads
    assert all(d >= 1 for d in durations)
    return durations


def build_golden_snapshot(path: Path, platform: str = "golden-platform") -> Path:
    session = SessionInfo(
        session_id="golden-session",
        platform_name=platform,
        started_at_epoch_ms=0,
        duration_ms=GOLDEN_SESSION_MS,
        slice_ms=GOLDEN_SLICE_MS,
    )
    agents = [
        AgentDescriptor(
            agent_id=name,
            name=name,
            role="overseer" if name.startswith("master") else "worker",
            rationality="deliberative" if name.startswith("master") else "reactive",
        )
        for (name, *_rest) in GOLDEN_ROWS
    ]

    events = []
    cursor = 0
    for name, count, overloads, activity, _pct, max_s, _avg, _sent, _rec in GOLDEN_ROWS:
        events.append(LifecycleEvent(agent_id=name, kind="created", at=0))
        for duration in synth_durations(
            count, overloads, ms_from_clock(activity), ms_from_clock(max_s),
            GOLDEN_SLICE_MS,
        ):
            events.append(IterationEvent(agent_id=name, start=cursor, duration_ms=duration))
            cursor += duration
    assert cursor == GOLDEN_ACTIVITY_MS

    senders = [name for (name, *_r) in GOLDEN_ROWS
               for _ in range(_sent_of(name))]
    receivers = [name for (name, *_r) in GOLDEN_ROWS
                 for _ in range(_received_of(name))]
    assert len(senders) == len(receivers) == GOLDEN_MESSAGES
    step = (GOLDEN_SESSION_MS - 10) // GOLDEN_MESSAGES
    for i, (src, dst) in enumerate(zip(senders, receivers)):
        sent_at = 1 + i * step
        events.append(MessageEvent(
            message_id=f"golden-{i:04d}",
            sender=Endpoint(platform_id=platform, agent_id=src),
            receiver=Endpoint(platform_id=platform, agent_id=dst),
            sent_at=sent_at,
            received_at=sent_at + 3,
            headers=FipaHeaders(performative="inform", content=f"payload {i}"),
            scope=SCOPE_INTRA,
        ))

    events.sort(key=lambda ev: ev.timestamp)
    return write_snapshot(path, session, agents, events)


def _sent_of(name: str) -> int:
    return next(row[7] for row in GOLDEN_ROWS if row[0] == name)


def _received_of(name: str) -> int:
    return next(row[8] for row in GOLDEN_ROWS if row[0] == name)
