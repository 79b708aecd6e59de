"""Fixed-width text rendering of the flat profile.

Times at or above one minute print as M:SS.mmm, shorter ones as S.mmm; the
per-iteration columns always print as seconds with three decimals. Formatting
is locale-independent.
"""
from __future__ import annotations

from .queries import FlatProfile, FlatProfileRow, ProfileHeader


def fmt_clock(ms: int) -> str:
    """Elapsed time: '18:50.691' for >= 1 minute, '46.413' below."""
    if ms >= 60000:
        minutes, rem = divmod(ms, 60000)
        seconds, millis = divmod(rem, 1000)
        return f"{minutes}:{seconds:02d}.{millis:03d}"
    seconds, millis = divmod(ms, 1000)
    return f"{seconds}.{millis:03d}"


def fmt_seconds(ms: int) -> str:
    """Seconds with millisecond precision: 3740 -> '3.740'."""
    seconds, millis = divmod(ms, 1000)
    return f"{seconds}.{millis:03d}"


def fmt_pct(pct: float) -> str:
    centi = round(pct * 100)
    return f"{centi // 100}.{centi % 100:02d}"


_COLUMNS = (
    ("T>0 iterations", 14),
    ("T>100% overload", 15),
    ("Activity", 10),
    ("% Session activity", 18),
    ("Max(T)", 8),
    ("Average(T)", 10),
    ("Msg. sent", 9),
    ("Msg. rec.", 9),
)


def _header_block(header: ProfileHeader) -> list[str]:
    pairs = (
        ("Total Session Time", fmt_clock(header.duration_ms)),
        ("Total Activity", fmt_clock(header.total_activity_ms)),
        ("Messages Sent", str(header.messages_sent)),
        ("Messages Received", str(header.messages_received)),
        ("Time Slice Duration", f"{header.slice_ms} ms"),
    )
    label_w = max(len(label) for label, _ in pairs)
    return [f"{label:<{label_w}}  {value}" for label, value in pairs]


def _row_cells(row: FlatProfileRow) -> list[str]:
    return [
        str(row.iterations_nonzero),
        str(row.overload_count),
        fmt_clock(row.activity_ms),
        fmt_pct(row.pct_session),
        fmt_seconds(row.max_ms),
        fmt_seconds(row.avg_ms),
        str(row.msgs_sent),
        str(row.msgs_received),
    ]


def render_flat_profile(profile: FlatProfile) -> str:
    """Aligned table mirroring the session header and per-agent columns."""
    lines = _header_block(profile.header)
    lines.append("")
    agent_w = max([5] + [len(row.name) for row in profile.rows])
    head = f"{'Agent':<{agent_w}}"
    for title, width in _COLUMNS:
        head += f"  {title:>{width}}"
    lines.append(head)
    for row in profile.rows:
        line = f"{row.name:<{agent_w}}"
        for cell, (_, width) in zip(_row_cells(row), _COLUMNS):
            line += f"  {cell:>{width}}"
        lines.append(line)
    return "\n".join(lines) + "\n"
