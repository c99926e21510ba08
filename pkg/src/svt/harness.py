"""Deterministic Monte Carlo experiment runner.

Sweeps an SNR grid for either scheme, aggregates block-error statistics into
CSV, and exports labeled received-vector datasets for training external
support decoders.  Every trial draws from an RngStream keyed by
(master_seed, snr_index, trial_index, purpose), so results are byte-identical
regardless of execution order or worker count, and appending SNR points never
perturbs existing ones.
"""

from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .channel_model import (
    coherence_time,
    eaui_support,
    multipath_time_channel,
    perturb_gains,
    rayleigh_freq_channel,
)
from .fdst import FdstConfig, UI_DATA_POSITIONS, UI_EAUI, fdst_decode, fdst_transmit
from .signal_core import RngStream, qam_modulate
from .sparse_codec import CodecConfig, SparseVector, encode_sparse
from .svc import Codebook, generate_codebook, save_codebook, svc_decode, svc_transmit

SCHEME_FDST = "fdst"
SCHEME_SVC = "svc"

CSV_HEADER = "snr_db,trials,block_errors,bler,support_errors,symbol_errors,ci95"

# purpose tags inside one trial's stream id
_TAG_BITS = 0
_TAG_CHANNEL = 1
_TAG_NOISE = 2
_TAG_RECIPROCITY = 3
# run-global draws use purpose 7 (never used by trials)
_TAG_GLOBAL = 7

_TRIAL_SPAN = 1 << 32  # trial indices per SNR point


@dataclass(frozen=True)
class SchemeConfig:
    """Full parameter set of one Monte Carlo experiment."""

    scheme: str
    n: int
    m: int
    k: int
    bits_per_symbol: int
    snr_db_list: tuple
    trials_per_point: int
    master_seed: int
    out_path: str | None = None
    ui_mode: str = UI_EAUI
    tolerance: int = 1
    circular: bool = True
    channel_mode: str = "iid_rayleigh"
    num_taps: int = 8
    sample_rate_hz: float = 7.68e6
    carrier_hz: float = 1.8e9
    speed_mps: float = 10.0 / 3.6
    reciprocity_error_var: float = 0.0
    # the spreading codebook is system configuration known at both ends, so
    # it is keyed separately from the per-trial randomness
    codebook_seed: int = 0

    def __post_init__(self):
        if self.scheme not in (SCHEME_FDST, SCHEME_SVC):
            raise ValueError(f"unknown scheme {self.scheme!r}")
        snr = tuple(float(s) for s in self.snr_db_list)
        object.__setattr__(self, "snr_db_list", snr)
        if not snr:
            raise ValueError("SNR list must be nonempty")
        if self.trials_per_point < 1:
            raise ValueError("trials_per_point must be >= 1")
        if self.channel_mode not in ("iid_rayleigh", "multipath"):
            raise ValueError(f"unknown channel_mode {self.channel_mode!r}")
        # construct the per-scheme configs now so bad parameters surface
        # before any trial runs
        if self.scheme == SCHEME_FDST:
            self.fdst_config(0.0)
        else:
            self.codec()

    def fdst_config(self, noise_variance: float) -> FdstConfig:
        return FdstConfig(
            n=self.n,
            m=self.m,
            k=self.k,
            bits_per_symbol=self.bits_per_symbol,
            sample_rate_hz=self.sample_rate_hz,
            ui_mode=self.ui_mode,
            tolerance=self.tolerance,
            noise_variance=noise_variance,
            circular=self.circular,
        )

    def codec(self) -> CodecConfig:
        return CodecConfig(self.n, self.k, self.bits_per_symbol)


def fdst_defaults(**overrides) -> SchemeConfig:
    """512-point transform, 256 early samples, 36 active 16-QAM subcarriers."""
    base = SchemeConfig(
        scheme=SCHEME_FDST,
        n=512,
        m=256,
        k=36,
        bits_per_symbol=4,
        snr_db_list=(0.0, 4.0, 8.0, 12.0),
        trials_per_point=1000,
        master_seed=1,
    )
    return replace(base, **overrides) if overrides else base


def svc_defaults(**overrides) -> SchemeConfig:
    """42 x 96 antipodal codebook, 2 active positions, 12-bit payload."""
    base = SchemeConfig(
        scheme=SCHEME_SVC,
        n=96,
        m=42,
        k=2,
        bits_per_symbol=0,
        snr_db_list=(0.0, 4.0, 8.0, 12.0),
        trials_per_point=1000,
        master_seed=1,
        ui_mode=UI_DATA_POSITIONS,
    )
    return replace(base, **overrides) if overrides else base


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of a single transmit/decode trial."""

    block_error: bool
    support_error: bool
    symbol_error: bool


@dataclass(frozen=True)
class BlerRow:
    """Aggregated outcomes for one SNR point.

    ``support_errors`` counts trials whose final support was wrong (or
    unmatched); ``symbol_errors`` counts trials with a correct support but
    wrong payload bits; every block error falls in exactly one bucket.
    """

    snr_db: float
    trials: int
    block_errors: int
    bler: float
    support_errors: int
    symbol_errors: int

    @property
    def ci95(self) -> float:
        """95% binomial confidence half-width on the BLER estimate."""
        return 1.96 * math.sqrt(self.bler * (1.0 - self.bler) / self.trials)


def noise_variance_for_snr(config: SchemeConfig, snr_db: float) -> float:
    """SNR is average received signal power per complex sample (at unit
    average channel gain and unit-energy symbols) over the noise variance:
    k/n per time sample for the transform scheme, k/m per spread sample."""
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    linear = 10.0 ** (snr_db / 10.0)
    per_sample = config.k / (config.n if config.scheme == SCHEME_FDST else config.m)
    return per_sample / linear


def _stream(config: SchemeConfig, snr_index: int, trial_index: int, purpose: int) -> RngStream:
    stream_id = (snr_index * _TRIAL_SPAN + trial_index) * 8 + purpose
    return RngStream(config.master_seed, stream_id)


def _codebook_for(config: SchemeConfig) -> Codebook:
    return generate_codebook(config.m, config.n, RngStream(config.codebook_seed, _TAG_GLOBAL))


def _draw_channel(config: SchemeConfig, snr_index: int, trial_index: int):
    rng = _stream(config, snr_index, trial_index, _TAG_CHANNEL)
    if config.channel_mode == "multipath":
        return multipath_time_channel(config.num_taps, config.n, rng)
    return rayleigh_freq_channel(config.n, rng)


def _run_fdst_trial(config: SchemeConfig, snr_index: int, trial_index: int,
                    noise_variance: float) -> TrialRecord:
    fcfg = config.fdst_config(noise_variance)
    channel = _draw_channel(config, snr_index, trial_index)
    bits_gen = _stream(config, snr_index, trial_index, _TAG_BITS).generator()
    noise_rng = _stream(config, snr_index, trial_index, _TAG_NOISE)

    if config.ui_mode == UI_EAUI:
        tx_view = channel
        if config.reciprocity_error_var > 0:
            tx_view = perturb_gains(
                channel,
                config.reciprocity_error_var,
                _stream(config, snr_index, trial_index, _TAG_RECIPROCITY),
            )
        tx_support = eaui_support(tx_view, config.k)
        bits = bits_gen.integers(0, 2, config.k * config.bits_per_symbol)
        symbols = qam_modulate(bits, 1 << config.bits_per_symbol)
        sv = SparseVector(config.n, tx_support, symbols)
        y = fdst_transmit(sv, channel, noise_variance, noise_rng)
        expected = eaui_support(channel, config.k)
        out = fdst_decode(y, fcfg, channel, expected)
        support_error = (not out.ui_matched) or out.support != sv.support
        block = support_error or out.bits is None or not np.array_equal(out.bits, bits)
        return TrialRecord(block, support_error, block and not support_error)

    codec = config.codec()
    bits = bits_gen.integers(0, 2, codec.payload_bits)
    sv = encode_sparse(bits, codec)
    y = fdst_transmit(sv, channel, noise_variance, noise_rng)
    out = fdst_decode(y, fcfg, channel, None)
    support_error = out.support != sv.support
    block = out.bits is None or not np.array_equal(out.bits, bits)
    return TrialRecord(block, support_error, block and not support_error)


def _draw_svc_block(config: SchemeConfig, codebook: Codebook, snr_index: int,
                    trial_index: int, noise_variance: float):
    codec = config.codec()
    bits_gen = _stream(config, snr_index, trial_index, _TAG_BITS).generator()
    bits = bits_gen.integers(0, 2, codec.position_bits)
    sv = encode_sparse(bits, codec)
    h_gen = _stream(config, snr_index, trial_index, _TAG_CHANNEL).generator()
    h = complex(h_gen.standard_normal() + 1j * h_gen.standard_normal()) / math.sqrt(2.0)
    y = svc_transmit(sv, codebook, h, noise_variance,
                     _stream(config, snr_index, trial_index, _TAG_NOISE))
    return bits, sv, y


def _run_svc_trial(config: SchemeConfig, codebook: Codebook, snr_index: int,
                   trial_index: int, noise_variance: float) -> TrialRecord:
    bits, sv, y = _draw_svc_block(config, codebook, snr_index, trial_index, noise_variance)
    out = svc_decode(y, codebook, config.k, config.codec())
    support_error = out.support != sv.support
    block = out.bits is None or not np.array_equal(out.bits, bits)
    return TrialRecord(block, support_error, block and not support_error)


def _count_chunk(args) -> tuple:
    config, snr_index, start, stop, noise_variance = args
    codebook = _codebook_for(config) if config.scheme == SCHEME_SVC else None
    blocks = supports = symbols = 0
    for trial in range(start, stop):
        if config.scheme == SCHEME_SVC:
            rec = _run_svc_trial(config, codebook, snr_index, trial, noise_variance)
        else:
            rec = _run_fdst_trial(config, snr_index, trial, noise_variance)
        blocks += rec.block_error
        supports += rec.support_error
        symbols += rec.symbol_error
    return blocks, supports, symbols


def _worker_count() -> int:
    raw = os.environ.get("SVT_WORKERS", "").strip()
    if not raw:
        return 1
    count = int(raw)
    if count < 1:
        raise ValueError(f"SVT_WORKERS must be >= 1, got {raw!r}")
    return count


def _warn_if_channel_not_static(config: SchemeConfig) -> None:
    # constant-channel approximation needs packet duration << coherence time
    duration = config.m / config.sample_rate_hz
    t_c = coherence_time(config.carrier_hz, config.speed_mps)
    if duration > t_c:
        warnings.warn(
            f"packet duration {duration:.3e}s exceeds coherence time {t_c:.3e}s; "
            "the constant-channel approximation does not hold",
            stacklevel=2,
        )


def run_bler(config: SchemeConfig) -> list:
    """Monte Carlo BLER sweep over the configured SNR grid.

    Deterministic for a fixed config: per-trial randomness is keyed by
    (master_seed, snr_index, trial_index), and aggregation is plain counting,
    so worker count and execution order cannot change the result.
    """
    if config.scheme == SCHEME_SVC:
        _warn_if_channel_not_static(config)
    workers = _worker_count()
    trials = config.trials_per_point
    rows = []
    chunks_per_point = 1 if workers == 1 else workers * 4
    bounds = np.linspace(0, trials, chunks_per_point + 1).astype(int)
    executor = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for snr_index, snr_db in enumerate(config.snr_db_list):
            noise_variance = noise_variance_for_snr(config, snr_db)
            tasks = [
                (config, snr_index, int(lo), int(hi), noise_variance)
                for lo, hi in zip(bounds[:-1], bounds[1:])
            ]
            if executor is None:
                partials = [_count_chunk(task) for task in tasks]
            else:
                partials = list(executor.map(_count_chunk, tasks))
            blocks = sum(p[0] for p in partials)
            supports = sum(p[1] for p in partials)
            symbols = sum(p[2] for p in partials)
            rows.append(
                BlerRow(snr_db, trials, blocks, blocks / trials, supports, symbols)
            )
    finally:
        if executor is not None:
            executor.shutdown()
    return rows


def write_bler_csv(rows: Sequence[BlerRow], path) -> None:
    """Fixed-schema CSV; floats use shortest-roundtrip repr so reruns are
    byte-identical."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(CSV_HEADER + "\n")
        for row in rows:
            fh.write(
                ",".join(
                    [
                        repr(float(row.snr_db)),
                        str(row.trials),
                        str(row.block_errors),
                        repr(float(row.bler)),
                        str(row.support_errors),
                        str(row.symbol_errors),
                        repr(float(row.ci95)),
                    ]
                )
                + "\n"
            )


def export_dataset(config: SchemeConfig, count: int, path, codebook_out=None) -> None:
    """Write ``count`` labeled spread-scheme examples for decoder training.

    Header line: ``m n k count snr_db seed``.  Each data row holds the 2m
    interleaved real/imag parts of the received vector followed by the k
    support indices.  Requires a single configured SNR point (it goes in the
    header).  Optionally also exports the codebook alongside.
    """
    if config.scheme != SCHEME_SVC:
        raise ValueError("dataset export is defined for the spread scheme only")
    if count < 1:
        raise ValueError("count must be >= 1")
    if len(config.snr_db_list) != 1:
        raise ValueError("dataset export needs exactly one SNR point")
    snr_db = config.snr_db_list[0]
    noise_variance = noise_variance_for_snr(config, snr_db)
    codebook = _codebook_for(config)
    if codebook_out is not None:
        save_codebook(codebook, codebook_out)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(
            f"{config.m} {config.n} {config.k} {count} "
            f"{repr(float(snr_db))} {config.master_seed}\n"
        )
        for i in range(count):
            _, sv, y = _draw_svc_block(config, codebook, 0, i, noise_variance)
            fields = []
            for sample in y:
                fields.append(repr(float(sample.real)))
                fields.append(repr(float(sample.imag)))
            fields.extend(str(idx) for idx in sv.support)
            fh.write(" ".join(fields) + "\n")


_CONFIG_KEY_TYPES = {
    "scheme": str,
    "n": int,
    "m": int,
    "k": int,
    "bs": int,
    "snr": "snr",
    "trials": int,
    "seed": int,
    "out": str,
    "ui_mode": str,
    "tolerance": int,
    "circular": "bool",
    "channel_mode": str,
    "num_taps": int,
    "sample_rate_hz": float,
    "carrier_hz": float,
    "speed_mps": float,
    "reciprocity_error_var": float,
    "codebook_seed": int,
}

_CONFIG_FIELD_NAMES = {
    "bs": "bits_per_symbol",
    "snr": "snr_db_list",
    "trials": "trials_per_point",
    "seed": "master_seed",
    "out": "out_path",
}


def parse_config_file(path) -> dict:
    """Flat key=value text (blank lines and # comments allowed); unknown keys
    are rejected.  Returns SchemeConfig field overrides."""
    overrides = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            kind = _CONFIG_KEY_TYPES.get(key)
            if kind is None:
                raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
            overrides[_CONFIG_FIELD_NAMES.get(key, key)] = _parse_config_value(kind, value)
    return overrides


def _parse_config_value(kind, value: str):
    if kind == "snr":
        return tuple(float(v) for v in value.split(","))
    if kind == "bool":
        lowered = value.lower()
        if lowered in ("1", "true", "yes"):
            return True
        if lowered in ("0", "false", "no"):
            return False
        raise ValueError(f"expected boolean, got {value!r}")
    return kind(value)
