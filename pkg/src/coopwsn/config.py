"""
Sectioned ``key = value`` run configuration.

Example::

    # comments start with '#'
    [topology]
    kind = src
    distance = 1.0

    [protocol]
    strategy = arq
    detector = crc4

    [sweep]
    variable = snr_db
    points = linspace 0 30 31

A few keys may appear before any section header as shorthands:
``topology``, ``strategy``, ``code``, ``detector``, ``channel``, ``beta``,
``seed`` and ``trials``.  Every omitted key takes the default listed in
:data:`SCHEMA`; unknown sections and keys are errors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .channel import CHANNEL_KINDS, ChannelModel
from .codecs import CodeSpec
from .cooperation import COMBINERS, TOPOLOGY_KINDS, Topology
from .energy import MRC_ENERGY_MODELS, EnergyParams
from .error_control import ACK_ERROR_MODELS, ProtocolConfig, Strategy
from .modem import ModulationSpec
from .montecarlo import SWEEP_VARIABLES, Scenario

__all__ = ["ConfigError", "RunConfig", "SCHEMA", "ALIASES", "parse_config", "emit_config", "load_config"]


class ConfigError(ValueError):
    """Invalid configuration; carries the line number and key when known."""

    def __init__(self, message, line=None, key=None):
        self.message = message
        self.line = line
        self.key = key
        where = []
        if line is not None:
            where.append(f"line {line}")
        if key is not None:
            where.append(key)
        super().__init__(f"{': '.join(where)}: {message}" if where else message)


# -- value codecs -------------------------------------------------------------


def _float(text):
    v = float(text)
    if math.isnan(v):
        raise ValueError("nan is not allowed")
    return v


def _int(text):
    return int(text, 10)


def _bool(text):
    t = text.lower()
    if t in ("true", "yes", "1", "on"):
        return True
    if t in ("false", "no", "0", "off"):
        return False
    raise ValueError(f"expected true or false, got {text!r}")


def _auto_float(text):
    return None if text.lower() == "auto" else _float(text)


def _choice(options):
    def parse(text):
        if text not in options:
            raise ValueError(f"expected one of {', '.join(options)}, got {text!r}")
        return text

    return parse


def _relays(text):
    out = []
    for part in text.split(";"):
        xy = part.split()
        if len(xy) != 2:
            raise ValueError(f"relay positions are 'x y; x y', got {text!r}")
        out.append((_float(xy[0]), _float(xy[1])))
    return tuple(out)


def _points(text):
    """Numbers, ``linspace a b n``, ``logspace a b n`` or ``;``-separated codes."""
    parts = text.split()
    if not parts:
        raise ValueError("no sweep points")
    head = parts[0].lower()
    if head in ("linspace", "logspace"):
        if len(parts) != 4:
            raise ValueError(f"expected '{head} start stop count'")
        a, b, n = _float(parts[1]), _float(parts[2]), _int(parts[3])
        if n < 1:
            raise ValueError("count must be >= 1")
        fn = np.linspace if head == "linspace" else np.logspace
        return tuple(float(v) for v in fn(a, b, n))
    try:
        return tuple(_float(p) for p in parts)
    except ValueError:
        return tuple(CodeSpec.parse(p.strip()).label() for p in text.split(";"))


def _fmt(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if v is None:
        return "auto"
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _fmt_relays(v):
    return "; ".join(f"{x!r} {y!r}" for x, y in v)


def _fmt_points(v):
    if v and isinstance(v[0], str):
        return "; ".join(v)
    return " ".join(repr(float(p)) for p in v)


# section -> key -> (parser, default, formatter)
SCHEMA = {
    "topology": {
        "kind": (_choice(TOPOLOGY_KINDS), "dt", _fmt),
        "distance": (_float, 1.0, _fmt),
        "relays": (_relays, ((0.5, 0.5), (0.5, -0.5)), _fmt_relays),
        "path_loss_exponent": (_float, 2.0, _fmt),
        "tx_power": (_float, 1.0, _fmt),
        "noise_power": (_float, 1.0, _fmt),
    },
    "modulation": {"constellation_size": (_int, 4, _fmt)},
    "channel": {
        "kind": (_choice(CHANNEL_KINDS), "rayleigh", _fmt),
        "error_rate": (_float, 0.0, _fmt),
    },
    "protocol": {
        "strategy": (_choice(tuple(s.value for s in Strategy)), "fec", _fmt),
        "code": (lambda t: CodeSpec.parse(t).label(), "none", _fmt),
        "detector": (_choice(("none", "crc4")), "none", _fmt),
        "max_retransmissions": (_int, 16, _fmt),
        "timeout": (_auto_float, None, _fmt),
        "round_trip": (_auto_float, None, _fmt),
        "ack_error_model": (_choice(ACK_ERROR_MODELS), "same_channel", _fmt),
        "ack_bits": (_int, 16, _fmt),
        "processing_time": (_float, 1e-6, _fmt),
    },
    "energy": {
        "tx_power": (_float, 1.0, _fmt),
        "beta": (_float, 0.5, _fmt),
        "tx_circuit_power": (_float, 0.1, _fmt),
        "rx_circuit_power": (_float, 0.1, _fmt),
        "bit_rate": (_float, 1e6, _fmt),
        "mrc_model": (_choice(MRC_ENERGY_MODELS), "eq22", _fmt),
        "charge_ack": (_bool, False, _fmt),
    },
    "sweep": {
        "variable": (_choice(SWEEP_VARIABLES), "snr_db", _fmt),
        "points": (_points, (10.0,), _fmt_points),
        "trials": (_int, 100_000, _fmt),
        "seed": (_int, 0, _fmt),
        "payload_bits": (_int, 96, _fmt),
        "frames_per_session": (_int, 1, _fmt),
        "combining": (_choice(COMBINERS), "sum", _fmt),
    },
    "output": {
        "path": (str, "-", _fmt),
        "format": (_choice(("csv", "tsv")), "csv", _fmt),
        "emit_analytic": (_bool, False, _fmt),
        "emit_simulated": (_bool, True, _fmt),
        "workers": (_int, 1, _fmt),
    },
}

ALIASES = {
    "topology": ("topology", "kind"),
    "strategy": ("protocol", "strategy"),
    "code": ("protocol", "code"),
    "detector": ("protocol", "detector"),
    "channel": ("channel", "kind"),
    "beta": ("energy", "beta"),
    "seed": ("sweep", "seed"),
    "trials": ("sweep", "trials"),
}


# -- config object ------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    """Validated configuration: the raw settings plus the scenario built from them."""

    values: dict = field(compare=False, repr=False)
    scenario: Scenario
    output: str = "-"
    format: str = "csv"
    emit_analytic: bool = False
    emit_simulated: bool = True
    workers: int = 1

    def __eq__(self, other):
        return isinstance(other, RunConfig) and self.values == other.values

    def __hash__(self):
        return hash(tuple((s, tuple(sorted(d.items()))) for s, d in sorted(self.values.items())))

    def get(self, section, key):
        return self.values[section][key]

    @property
    def delimiter(self) -> str:
        return "\t" if self.format == "tsv" else ","

    def with_values(self, **overrides) -> "RunConfig":
        """Copy with ``section__key=value`` overrides (already parsed values)."""
        vals = {s: dict(d) for s, d in self.values.items()}
        for name, v in overrides.items():
            section, key = name.split("__", 1)
            if section not in SCHEMA or key not in SCHEMA[section]:
                raise ConfigError("unknown key", key=f"{section}.{key}")
            vals[section][key] = v
        return _build(vals, {})


def _strip_comment(line):
    out = []
    for i, ch in enumerate(line):
        if ch == "#" and (i == 0 or line[i - 1].isspace()):
            break
        out.append(ch)
    return "".join(out).strip()


def parse_config(text: str) -> RunConfig:
    """Parse and validate configuration text.

    Raises
    ------
    ConfigError
        With the line number for syntax errors and the offending key for
        semantic ones.
    """
    values = {s: {k: spec[1] for k, spec in keys.items()} for s, keys in SCHEMA.items()}
    lines = {}
    section = None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if line.startswith("["):
            if not line.endswith("]"):
                raise ConfigError(f"malformed section header {raw.strip()!r}", line=no)
            section = line[1:-1].strip().lower()
            if section not in SCHEMA:
                raise ConfigError(f"unknown section [{section}]", line=no)
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", line=no)
        key, _, value = line.partition("=")
        key, value = key.strip().lower(), value.strip()
        if not key:
            raise ConfigError("missing key before '='", line=no)
        if section is None:
            if key not in ALIASES:
                raise ConfigError(f"key {key!r} outside a section (shorthands: {', '.join(ALIASES)})", line=no)
            sec, k = ALIASES[key]
        else:
            sec, k = section, key
            if k not in SCHEMA[sec]:
                raise ConfigError(f"unknown key {k!r} in [{sec}]", line=no, key=f"{sec}.{k}")
        if not value:
            raise ConfigError("empty value", line=no, key=f"{sec}.{k}")
        if (sec, k) in lines:
            raise ConfigError(f"duplicate key (first set on line {lines[sec, k]})", line=no, key=f"{sec}.{k}")
        try:
            values[sec][k] = SCHEMA[sec][k][0](value)
        except ValueError as exc:
            raise ConfigError(str(exc), line=no, key=f"{sec}.{k}") from None
        lines[sec, k] = no
    return _build(values, lines)


def _build(values, lines) -> RunConfig:
    def fail(sec, key, msg):
        raise ConfigError(msg, line=lines.get((sec, key)), key=f"{sec}.{key}")

    def guard(sec, key, make):
        try:
            return make()
        except ValueError as exc:
            fail(sec, key, str(exc))

    t, p, e, s, o = (values[k] for k in ("topology", "protocol", "energy", "sweep", "output"))
    topology = guard(
        "topology",
        "kind",
        lambda: Topology.from_geometry(
            t["kind"], t["distance"], t["relays"], t["path_loss_exponent"], t["tx_power"], t["noise_power"]
        ),
    )
    mod = guard("modulation", "constellation_size", lambda: ModulationSpec(values["modulation"]["constellation_size"]))
    channel = guard("channel", "error_rate", lambda: ChannelModel(values["channel"]["kind"], values["channel"]["error_rate"]))
    strategy = Strategy(p["strategy"])
    code = CodeSpec.parse(p["code"])
    detector = CodeSpec.parse(p["detector"])
    if strategy is not Strategy.FEC_ONLY and not detector.detects:
        fail("protocol", "detector", f"detector required: {strategy.value} needs detector = crc4")
    if strategy in (Strategy.HARQ_T1, Strategy.HARQ_T2) and not code.corrects:
        fail("protocol", "code", f"{strategy.value} needs a correcting code (hamming74 or rs N K)")
    if strategy is Strategy.SW_ARQ and code.corrects:
        fail("protocol", "code", "arq sends data + CRC only; use strategy = harq1 for coded frames")
    if p["max_retransmissions"] < 0:
        fail("protocol", "max_retransmissions", "must be >= 0")
    for key in ("timeout", "round_trip"):
        if p[key] is not None and not p[key] > 0:
            fail("protocol", key, "must be > 0 or auto")
    if p["ack_bits"] < 7:
        fail("protocol", "ack_bits", "must be >= 7 (kind, NFE and CRC-4)")
    if p["processing_time"] < 0:
        fail("protocol", "processing_time", "must be >= 0")
    protocol = guard(
        "protocol",
        "strategy",
        lambda: ProtocolConfig(
            strategy,
            code=code,
            detector=detector,
            max_retransmissions=p["max_retransmissions"],
            timeout=p["timeout"],
            round_trip=p["round_trip"],
            ack_error_model=p["ack_error_model"],
            ack_bits=p["ack_bits"],
            processing_time=p["processing_time"],
        ),
    )
    if not 0.0 < e["beta"] < 1.0:
        fail("energy", "beta", f"beta must satisfy 0 < beta < 1, got {e['beta']!r}")
    for key in ("tx_power", "tx_circuit_power", "rx_circuit_power", "bit_rate"):
        if not e[key] >= 0 or (key == "bit_rate" and not e[key] > 0):
            fail("energy", key, "must be > 0" if key == "bit_rate" else "must be >= 0")
    energy = EnergyParams(
        tx_power=e["tx_power"],
        amplifier_loss=e["beta"],
        tx_circuit_power=e["tx_circuit_power"],
        rx_circuit_power=e["rx_circuit_power"],
        bit_rate=e["bit_rate"],
        bits_per_symbol=mod.bits_per_symbol,
    )
    if s["trials"] < 1:
        fail("sweep", "trials", "must be >= 1")
    if not 0 <= s["seed"] < 2**64:
        fail("sweep", "seed", "must be an unsigned 64-bit integer")
    if s["variable"] == "code" and not isinstance(s["points"][0], str):
        fail("sweep", "points", "a code sweep needs code labels, e.g. 'rs 31 21; hamming74'")
    if s["variable"] != "code" and isinstance(s["points"][0], str):
        fail("sweep", "points", f"a {s['variable']} sweep needs numbers")
    scenario = guard(
        "sweep",
        "points",
        lambda: Scenario(
            topology=topology,
            modulation=mod,
            protocol=protocol,
            energy=energy,
            channel=channel,
            sweep_variable=s["variable"],
            sweep_points=s["points"],
            trials_per_point=s["trials"],
            master_seed=s["seed"],
            payload_bits=s["payload_bits"],
            frames_per_session=s["frames_per_session"],
            combining=s["combining"],
            mrc_energy_model=e["mrc_model"],
            charge_ack=e["charge_ack"],
        ),
    )
    if not (o["emit_analytic"] or o["emit_simulated"]):
        fail("output", "emit_simulated", "at least one of emit_analytic and emit_simulated must be true")
    if o["workers"] < 1:
        fail("output", "workers", "must be >= 1")
    frozen = {sec: dict(d) for sec, d in values.items()}
    return RunConfig(
        values=frozen,
        scenario=scenario,
        output=o["path"],
        format=o["format"],
        emit_analytic=o["emit_analytic"],
        emit_simulated=o["emit_simulated"],
        workers=o["workers"],
    )


def emit_config(config: RunConfig) -> str:
    """Full configuration text; ``parse_config`` of it gives an equal config."""
    out = []
    for sec, keys in SCHEMA.items():
        if out:
            out.append("")
        out.append(f"[{sec}]")
        for key, (_, _, fmt) in keys.items():
            out.append(f"{key} = {fmt(config.values[sec][key])}")
    return "\n".join(out) + "\n"


def load_config(path) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc.strerror}", key=str(path)) from None
    except UnicodeDecodeError:
        raise ConfigError("config is not valid UTF-8", key=str(path)) from None
    return parse_config(text)
