"""Per-payload transmission logs and their line-oriented text form."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .engine import Outcome, SessionResults

__all__ = [
    "AttemptRecord",
    "TransmissionLog",
    "logs_from_results",
    "format_records",
    "parse_records",
    "summarize",
    "OUTCOME_NAMES",
]

OUTCOME_NAMES = {
    Outcome.ACCEPTED: "accepted",
    Outcome.DUPLICATE: "duplicate",
    Outcome.REJECTED: "rejected",
    Outcome.LOST: "lost",
    Outcome.DECODED: "decoded",
}
_OUTCOME_CODES = {v: k for k, v in OUTCOME_NAMES.items()}
_HEADER = "# session\tframe\tattempt\tevent\toutcome\tbits\telapsed"


@dataclass(frozen=True)
class AttemptRecord:
    session: int
    frame: int
    attempt: int
    event: int
    outcome: str
    bits: int
    elapsed: float

    def to_line(self) -> str:
        return "\t".join(
            [str(self.session), str(self.frame), str(self.attempt), str(self.event), self.outcome,
             str(self.bits), repr(float(self.elapsed))]
        )

    @classmethod
    def from_line(cls, line: str) -> "AttemptRecord":
        parts = line.rstrip("\n").split("\t")
        if len(parts) != 7:
            raise ValueError(f"expected 7 tab-separated fields, got {len(parts)}: {line!r}")
        s, f, a, e, o, b, t = parts
        if o not in _OUTCOME_CODES:
            raise ValueError(f"unknown outcome {o!r}")
        try:
            return cls(int(s), int(f), int(a), int(e), o, int(b), float(t))
        except ValueError as exc:
            raise ValueError(f"malformed record {line!r}") from exc


@dataclass(frozen=True)
class TransmissionLog:
    """What happened to one payload.

    Attributes
    ----------
    attempts : int
        Source transmissions of this payload (first try included).
    delivered : bool
        The destination accepted the payload.
    duplicate_delivered : bool
        The destination accepted it more than once.
    total_bits_sent : int
        Data bits on air (source and relay transmissions) plus control bits.
    elapsed : float
        Seconds from the first attempt to the sender's last event.
    energy_events : tuple of int
        Topology event class of every attempt.
    """

    attempts: int
    delivered: bool
    duplicate_delivered: bool
    total_bits_sent: int
    elapsed: float
    energy_events: tuple
    payload_bits: int
    acknowledged: bool = False
    data_bits: int = 0
    control_bits: int = 0
    energy: float = 0.0
    bit_errors: int = 0
    session: int = 0
    frame: int = 0
    records: tuple = field(default_factory=tuple)

    def lines(self) -> list[str]:
        return [r.to_line() for r in self.records]


def logs_from_results(res: SessionResults, session_ids=None) -> list[TransmissionLog]:
    """One log per payload that was started, in (session, frame) order."""
    S, F = res.attempts.shape
    ids = np.arange(S) if session_ids is None else np.asarray(session_ids)
    by_key = {}
    if res.records is not None:
        for r in res.records:
            by_key.setdefault((int(r["session"]), int(r["frame"])), []).append(
                AttemptRecord(
                    int(r["session"]), int(r["frame"]), int(r["attempt"]), int(r["event"]),
                    OUTCOME_NAMES[int(r["outcome"])], int(r["bits"]), float(r["elapsed"]),
                )
            )
    out = []
    for s in range(S):
        for f in range(F):
            if not res.started[s, f]:
                continue
            recs = tuple(by_key.get((int(ids[s]), f), ()))
            ev = tuple(res.events[s][f]) if res.events else tuple(r.event for r in recs)
            out.append(
                TransmissionLog(
                    attempts=int(res.attempts[s, f]),
                    delivered=bool(res.deliveries[s, f] > 0),
                    duplicate_delivered=bool(res.deliveries[s, f] > 1),
                    total_bits_sent=int(res.data_bits[s, f] + res.control_bits[s, f]),
                    elapsed=float(res.elapsed[s, f]),
                    energy_events=ev,
                    payload_bits=res.payload_bits,
                    acknowledged=bool(res.acked[s, f]),
                    data_bits=int(res.data_bits[s, f]),
                    control_bits=int(res.control_bits[s, f]),
                    energy=float(res.energy[s, f]),
                    bit_errors=int(res.bit_errors[s, f]),
                    session=int(ids[s]),
                    frame=f,
                    records=recs,
                )
            )
    return out


def format_records(logs) -> str:
    """Text form of the attempts of `logs`, one attempt per line."""
    lines = [_HEADER]
    for log in logs:
        lines.extend(log.lines())
    return "\n".join(lines) + "\n"


def parse_records(text: str) -> list[AttemptRecord]:
    out = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        out.append(AttemptRecord.from_line(line))
    return out


def summarize(logs):
    """Throughput, mean delay and delivery rate of a set of logs.

    Returns
    -------
    throughput : float
        Delivered payload bits over the summed elapsed time (bits/s).
    mean_delay : float
        Mean elapsed time of delivered payloads; ``nan`` if none.
    delivery_rate : float
    """
    logs = list(logs)
    if not logs:
        raise ValueError("summarize needs at least one log")
    total_time = sum(log.elapsed for log in logs)
    delivered = [log for log in logs if log.delivered]
    bits = sum(log.payload_bits for log in delivered)
    throughput = bits / total_time if total_time > 0 else 0.0
    mean_delay = float(np.mean([log.elapsed for log in delivered])) if delivered else float("nan")
    return throughput, mean_delay, len(delivered) / len(logs)
