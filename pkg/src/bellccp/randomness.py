"""Pluggable randomness sources with deterministic replay.

Three kinds: a seeded PRNG (PCG64), a raw bit file, and beacon-style
hex records. All sources expose the same two primitives:

* ``bit()`` -- one fair bit (0 or 1);
* ``uniform()`` -- one float in [0, 1).

Bit-backed sources consume their stream most-significant-bit first and
build uniforms from 53 bits; the PRNG derives bits by thresholding one
double at 1/2, so every primitive advances the underlying stream by a
fixed, documented amount. Finite sources raise once exhausted; a bit
shortfall is never papered over with pseudo-random fill.
"""

from __future__ import annotations

import urllib.request
from pathlib import Path

import numpy as np

from .errors import RandomnessExhaustedError, ValidationError

RECORD_BITS = 512
RECORD_HEX_CHARS = RECORD_BITS // 4


class RandomnessSource:
    """Base interface; see module docstring for the stream contract."""

    kind = "abstract"

    def bit(self) -> int:
        raise NotImplementedError

    def uniform(self) -> float:
        raise NotImplementedError

    def uniform_array(self, shape) -> np.ndarray:
        """Uniforms filled in row-major order, one stream draw each."""
        out = np.empty(shape, dtype=float)
        flat = out.reshape(-1)
        for i in range(flat.shape[0]):
            flat[i] = self.uniform()
        return out

    def describe(self) -> dict:
        return {"kind": self.kind}


class SeededPrng(RandomnessSource):
    """PCG64 stream; one double per ``uniform()`` and per ``bit()``."""

    kind = "seeded-prng"

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._rng = np.random.Generator(np.random.PCG64(self.seed))

    def bit(self) -> int:
        return 1 if self._rng.random() >= 0.5 else 0

    def uniform(self) -> float:
        return float(self._rng.random())

    def uniform_array(self, shape) -> np.ndarray:
        return self._rng.random(shape)

    def describe(self) -> dict:
        return {"kind": self.kind, "generator": "pcg64", "seed": self.seed}


class BitStreamSource(RandomnessSource):
    """Finite stream of raw bits, consumed MSB-first byte by byte."""

    kind = "bit-stream"

    def __init__(self, data: bytes, origin: str = "<memory>"):
        self._bits = np.unpackbits(np.frombuffer(bytes(data), dtype=np.uint8))
        self.origin = str(origin)
        self.cursor = 0

    @property
    def bits_total(self) -> int:
        return int(self._bits.shape[0])

    def bit(self) -> int:
        if self.cursor >= self._bits.shape[0]:
            raise RandomnessExhaustedError(
                f"bit stream from {self.origin} exhausted after {self.cursor} bits",
                bits_consumed=self.cursor)
        value = int(self._bits[self.cursor])
        self.cursor += 1
        return value

    def uniform(self) -> float:
        value = 0
        for _ in range(53):
            value = (value << 1) | self.bit()
        return value / float(1 << 53)

    def describe(self) -> dict:
        return {"kind": self.kind, "origin": self.origin, "bits": self.bits_total}


class BitFileSource(BitStreamSource):
    """Raw binary file treated as a bit stream."""

    kind = "bit-file"

    def __init__(self, path):
        path = Path(path)
        super().__init__(path.read_bytes(), origin=str(path))


class BeaconRecordsSource(BitStreamSource):
    """Concatenated 512-bit beacon records, in record order."""

    kind = "beacon-records"

    def __init__(self, records: list[bytes], origin: str = "<memory>"):
        for k, record in enumerate(records):
            if len(record) != RECORD_BITS // 8:
                raise ValidationError(f"record {k} has {len(record)} bytes, expected 64")
        self.records = list(records)
        super().__init__(b"".join(records), origin=origin)

    def describe(self) -> dict:
        return {"kind": self.kind, "origin": self.origin,
                "records": len(self.records), "bits": self.bits_total}


def parse_beacon_records(text: str, origin: str = "<memory>") -> list[bytes]:
    """Parse newline-separated 128-hex-character records.

    Malformed or truncated input raises with the byte offset of the
    offending line within the document.
    """
    records = []
    offset = 0
    for line in text.splitlines(keepends=True):
        stripped = line.strip()
        if stripped:
            if len(stripped) != RECORD_HEX_CHARS:
                raise ValidationError(
                    f"{origin}: record at byte offset {offset} has {len(stripped)} hex chars, "
                    f"expected {RECORD_HEX_CHARS}")
            try:
                records.append(bytes.fromhex(stripped))
            except ValueError:
                raise ValidationError(
                    f"{origin}: record at byte offset {offset} is not valid hex") from None
        offset += len(line)
    if not records:
        raise ValidationError(f"{origin}: no beacon records found")
    return records


def beacon_load(source, cache_path=None) -> BeaconRecordsSource:
    """Load beacon records from a local file or fetch them from a URL.

    Fetched documents are written verbatim to ``cache_path`` (required in
    fetch mode) so later runs can replay offline from the cached file.
    Network or parse failures raise; the protocol never falls back to a
    PRNG on its own.
    """
    source = str(source)
    if source.startswith(("http://", "https://", "file://")):
        if cache_path is None:
            raise ValidationError("fetching beacon records requires cache_path for replay")
        try:
            with urllib.request.urlopen(source) as response:
                text = response.read().decode("ascii")
        except Exception as exc:
            raise ValidationError(f"failed to fetch beacon records from {source}: {exc}") from exc
        records = parse_beacon_records(text, origin=source)
        Path(cache_path).write_text(text)
        return BeaconRecordsSource(records, origin=source)
    path = Path(source)
    records = parse_beacon_records(path.read_text(), origin=str(path))
    return BeaconRecordsSource(records, origin=str(path))
