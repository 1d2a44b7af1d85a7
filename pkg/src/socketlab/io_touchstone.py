"""Touchstone v1 and TDR trace ingestion.

Only Touchstone version 1 files with scattering parameters are handled.
Two-port rows follow the v1 column order ``S11 S21 S12 S22``; four-port
records are written row-major with one matrix row per line.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, ParseError

FREQ_UNITS = {"hz": 1.0, "khz": 1e3, "mhz": 1e6, "ghz": 1e9}
FORMATS = ("RI", "MA", "DB")
SUPPORTED_PORTS = (2, 4)

# v1 defaults when no option line is present
_DEFAULT_OPTIONS = ("ghz", "MA", 50.0)


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class NetworkData:
    """Frequency sweep of complex ``ports x ports`` scattering matrices.

    ``s`` has shape ``(len(freqs), ports, ports)`` and ``s[k, m-1, n-1]`` is
    S_mn at ``freqs[k]``.
    """

    freqs: np.ndarray
    s: np.ndarray
    z_ref: float = 50.0

    def __post_init__(self):
        freqs = np.asarray(self.freqs, dtype=float).reshape(-1)
        s = np.asarray(self.s, dtype=complex)
        if s.ndim != 3 or s.shape[1] != s.shape[2]:
            raise InputError(f"s must have shape (n, P, P), got {s.shape}")
        if s.shape[0] != freqs.size:
            raise InputError(f"{freqs.size} frequencies but {s.shape[0]} matrices")
        if s.shape[1] not in SUPPORTED_PORTS:
            raise InputError(f"unsupported port count {s.shape[1]}")
        if freqs.size == 0:
            raise InputError("empty sweep")
        if not np.all(np.isfinite(freqs)) or np.any(freqs <= 0):
            raise InputError("frequencies must be finite and > 0")
        if np.any(np.diff(freqs) <= 0):
            raise InputError("frequencies must be strictly increasing")
        if not np.all(np.isfinite(s)):
            raise InputError("non-finite S-parameter entries")
        if not (self.z_ref > 0 and math.isfinite(self.z_ref)):
            raise InputError(f"z_ref must be > 0, got {self.z_ref}")
        object.__setattr__(self, "freqs", _frozen(freqs))
        object.__setattr__(self, "s", _frozen(s))
        object.__setattr__(self, "z_ref", float(self.z_ref))

    @property
    def ports(self) -> int:
        return self.s.shape[1]

    def __len__(self):
        return self.freqs.size

    def sparam(self, out_port: int, in_port: int) -> np.ndarray:
        """Return S_{out,in} over frequency (1-based port numbers)."""
        if not (1 <= out_port <= self.ports and 1 <= in_port <= self.ports):
            raise InputError(f"port pair ({out_port}, {in_port}) not in a {self.ports}-port")
        return self.s[:, out_port - 1, in_port - 1]


@dataclass(frozen=True, eq=False)
class TdrTrace:
    """Time-sampled TDR record; ``v_meas`` is incident plus reflected voltage."""

    times: np.ndarray
    v_meas: np.ndarray
    v_plus: float = 0.25
    rise_time: float = 20e-12

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float).reshape(-1)
        v = np.asarray(self.v_meas, dtype=float).reshape(-1)
        if times.size != v.size:
            raise InputError(f"{times.size} times but {v.size} voltages")
        if times.size == 0:
            raise InputError("empty trace")
        if np.any(np.diff(times) <= 0):
            raise InputError("times must be strictly increasing")
        if not self.v_plus > 0:
            raise InputError(f"v_plus must be > 0, got {self.v_plus}")
        if self.rise_time < 0:
            raise InputError("rise_time must be >= 0")
        object.__setattr__(self, "times", _frozen(times))
        object.__setattr__(self, "v_meas", _frozen(v))

    @property
    def dt(self) -> float:
        """Median sample spacing."""
        if self.times.size < 2:
            return 0.0
        return float(np.median(np.diff(self.times)))


def _parse_options(tokens, lineno):
    unit, fmt, z = _DEFAULT_OPTIONS
    it = iter(tokens[1:])
    for tok in it:
        low = tok.lower()
        if low in FREQ_UNITS:
            unit = low
        elif tok.upper() in FORMATS:
            fmt = tok.upper()
        elif low == "s":
            pass
        elif low in ("y", "z", "g", "h"):
            raise ParseError(f"only S-parameters are supported, got {tok!r}", lineno)
        elif low == "r":
            try:
                z = float(next(it))
            except (StopIteration, ValueError):
                raise ParseError("option line: 'R' must be followed by a number", lineno)
            if not z > 0:
                raise ParseError(f"option line: reference impedance must be > 0, got {z}", lineno)
        else:
            raise ParseError(f"malformed option line, unexpected token {tok!r}", lineno)
    return unit, fmt, z


def _to_complex(a, b, fmt):
    if fmt == "RI":
        return complex(a, b)
    mag = 10.0 ** (a / 20.0) if fmt == "DB" else a
    ang = math.radians(b)
    return complex(mag * math.cos(ang), mag * math.sin(ang))


def parse_touchstone(text, ports: int | None = None) -> NetworkData:
    """Parse a Touchstone v1 S-parameter file.

    Args:
        text: file contents (``str``) or a text stream.
        ports: expected port count. If omitted it is inferred from the
            record length (9 numbers for 2-port, 33 for 4-port).

    Raises:
        ParseError: with the offending 1-based line number.
    """
    if not isinstance(text, str):
        text = text.read()
    options = None
    records = []  # (lineno, [floats])
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("!", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            raise ParseError(
                f"Touchstone v2 keyword {line.split()[0]!r} is not supported (v1 only)", lineno)
        if line.startswith("#"):
            if options is None:
                options = _parse_options(line.split(), lineno)
            continue
        try:
            values = [float(t) for t in line.split()]
        except ValueError:
            raise ParseError(f"non-numeric data in {raw.strip()!r}", lineno)
        # odd token count (frequency + pairs) starts a record; even continues it
        if len(values) % 2 == 1:
            records.append((lineno, values))
        elif not records:
            raise ParseError("continuation line before any frequency", lineno)
        else:
            records[-1][1].extend(values)
    if not records:
        raise ParseError("no data rows")
    unit, fmt, z_ref = options if options is not None else _DEFAULT_OPTIONS

    if ports is None:
        n = len(records[0][1])
        p = round(math.sqrt((n - 1) / 2))
        if 2 * p * p + 1 != n:
            raise ParseError(f"wrong column count ({n} values)", records[0][0])
        ports = p
    if ports not in SUPPORTED_PORTS:
        raise ParseError(f"unsupported port count {ports}", records[0][0])
    width = 2 * ports * ports + 1

    scale = FREQ_UNITS[unit]
    freqs = np.empty(len(records))
    s = np.empty((len(records), ports, ports), dtype=complex)
    prev = -math.inf
    for k, (lineno, values) in enumerate(records):
        if len(values) != width:
            raise ParseError(
                f"wrong column count: expected {width} values for a {ports}-port record, "
                f"got {len(values)}", lineno)
        f = values[0] * scale
        if not f > prev:
            raise ParseError(f"non-monotonic frequency {values[0]}", lineno)
        if not f > 0:
            raise ParseError(f"frequency must be > 0, got {values[0]}", lineno)
        prev = f
        freqs[k] = f
        entries = [_to_complex(values[i], values[i + 1], fmt) for i in range(1, width, 2)]
        m = np.array(entries).reshape(ports, ports)
        if ports == 2:
            # v1 two-port order is S11 S21 S12 S22
            m = m.T
        s[k] = m
    return NetworkData(freqs, s, z_ref)


def _fmt(x: float) -> str:
    return repr(float(x))


def write_touchstone(net: NetworkData, format: str = "RI", unit: str = "GHz") -> str:
    """Serialize ``net`` as Touchstone v1 text.

    Numbers use the shortest decimal that round-trips the float.
    """
    if not isinstance(net, NetworkData):
        raise TypeError("write_touchstone expects NetworkData")
    fmt = format.upper()
    if fmt not in FORMATS:
        raise InputError(f"format must be one of {FORMATS}, got {format!r}")
    if unit.lower() not in FREQ_UNITS:
        raise InputError(f"unknown frequency unit {unit!r}")
    scale = FREQ_UNITS[unit.lower()]
    p = net.ports
    out = io.StringIO()
    out.write(f"! {p}-port S-parameters written by socketlab\n")
    out.write(f"# {unit} S {fmt} R {_fmt(net.z_ref)}\n")
    for f, m in zip(net.freqs, net.s):
        if p == 2:
            m = m.T
        flat = m.reshape(-1)
        if fmt == "RI":
            pairs = [(z.real, z.imag) for z in flat]
        else:
            mag = np.abs(flat)
            ang = np.degrees(np.angle(flat))
            if fmt == "DB":
                mag = 20.0 * np.log10(np.maximum(mag, np.finfo(float).tiny))
            pairs = list(zip(mag, ang))
        fields = [" ".join((_fmt(a), _fmt(b))) for a, b in pairs]
        head = _fmt(f / scale)
        if p == 2:
            out.write(head + " " + " ".join(fields) + "\n")
        else:
            for row in range(p):
                chunk = " ".join(fields[row * p:(row + 1) * p])
                out.write((head + " " if row == 0 else "  ") + chunk + "\n")
    return out.getvalue()


def read_touchstone(path, ports: int | None = None) -> NetworkData:
    """Read a ``.s2p``/``.s4p`` file; the extension fixes the port count."""
    path = str(path)
    ext = path.rsplit(".", 1)[-1].lower()
    if ports is None and len(ext) == 3 and ext[0] == "s" and ext[2] == "p" and ext[1].isdigit():
        ports = int(ext[1])
    with open(path, encoding="utf-8") as fh:
        return parse_touchstone(fh.read(), ports=ports)


def _csv_rows(text):
    if not isinstance(text, str):
        text = text.read()
    rows = []
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        row = [c.strip() for c in row]
        if not row or all(c == "" for c in row) or row[0].startswith("#"):
            continue
        rows.append((lineno, row))
    return rows


def _is_number(s):
    try:
        float(s)
    except ValueError:
        return False
    return True


def _numeric_table(text, ncols, what):
    rows = _csv_rows(text)
    if rows and not any(_is_number(c) for c in rows[0][1]):
        rows = rows[1:]  # header
    if not rows:
        raise ParseError(f"empty {what} file")
    data = np.empty((len(rows), ncols))
    for i, (lineno, row) in enumerate(rows):
        if len(row) != ncols:
            raise ParseError(f"row {i}: expected {ncols} columns, got {len(row)}", lineno)
        try:
            data[i] = [float(c) for c in row]
        except ValueError:
            raise ParseError(f"row {i}: non-numeric value in {','.join(row)!r}", lineno)
    return data, [r[0] for r in rows]


def parse_tdr_csv(text, v_plus: float = 0.25, rise_time: float = 20e-12) -> TdrTrace:
    """Parse a two-column ``time_s, volts`` TDR record.

    One header line is tolerated. ``v_plus`` is an instrument setting and is
    not read from the file.
    """
    data, linenos = _numeric_table(text, 2, "TDR")
    t = data[:, 0]
    bad = np.nonzero(np.diff(t) <= 0)[0]
    if bad.size:
        i = int(bad[0]) + 1
        raise ParseError(f"row {i}: time not increasing ({t[i]} after {t[i - 1]})", linenos[i])
    if not v_plus > 0:
        raise InputError(f"v_plus must be > 0, got {v_plus}")
    return TdrTrace(t, data[:, 1], v_plus=v_plus, rise_time=rise_time)


def write_tdr_csv(trace: TdrTrace) -> str:
    lines = ["time_s,volts"]
    lines += [f"{_fmt(t)},{_fmt(v)}" for t, v in zip(trace.times, trace.v_meas)]
    return "\n".join(lines) + "\n"


def parse_sweep_csv(text):
    """Parse a ``freq_hz, re, im`` transmission sweep; returns ``(freqs, s21)``."""
    data, linenos = _numeric_table(text, 3, "sweep")
    f = data[:, 0]
    bad = np.nonzero(np.diff(f) <= 0)[0]
    if bad.size:
        i = int(bad[0]) + 1
        raise ParseError(f"row {i}: frequency not increasing", linenos[i])
    return f, data[:, 1] + 1j * data[:, 2]


def write_sweep_csv(freqs, s21) -> str:
    lines = ["freq_hz,re,im"]
    lines += [f"{_fmt(f)},{_fmt(z.real)},{_fmt(z.imag)}" for f, z in zip(freqs, np.asarray(s21))]
    return "\n".join(lines) + "\n"
