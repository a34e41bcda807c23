"""Stop-and-wait ARQ, HARQ Type-1/Type-2 and FEC-only over any topology."""

from .api import (
    run_fec_only,
    run_harq_t1,
    run_harq_t2,
    run_protocol,
    run_sw_arq,
    sw_arq_throughput_analytic,
)
from .config import ACK_ERROR_MODELS, ProtocolConfig, Strategy
from .engine import ATTEMPT_DTYPE, FaultPlan, LinkStats, Outcome, SessionResults, run_sessions
from .frames import ACK_BITS, Frame, FrameKind, decode_control, encode_control
from .log import (
    OUTCOME_NAMES,
    AttemptRecord,
    TransmissionLog,
    format_records,
    logs_from_results,
    parse_records,
    summarize,
)
from .schemes import KIND_DATA, KIND_FULL, KIND_PARITY, FrameFormat, ProtocolReceiver

__all__ = [
    "ACK_BITS",
    "ACK_ERROR_MODELS",
    "ATTEMPT_DTYPE",
    "AttemptRecord",
    "FaultPlan",
    "Frame",
    "FrameFormat",
    "FrameKind",
    "KIND_DATA",
    "KIND_FULL",
    "KIND_PARITY",
    "LinkStats",
    "OUTCOME_NAMES",
    "Outcome",
    "ProtocolConfig",
    "ProtocolReceiver",
    "SessionResults",
    "Strategy",
    "TransmissionLog",
    "decode_control",
    "encode_control",
    "format_records",
    "logs_from_results",
    "parse_records",
    "run_fec_only",
    "run_harq_t1",
    "run_harq_t2",
    "run_protocol",
    "run_sessions",
    "run_sw_arq",
    "summarize",
    "sw_arq_throughput_analytic",
]
