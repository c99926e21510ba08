"""Sparse vector transmission: codecs, link simulation, and recovery.

Short packets are mapped to k-sparse complex vectors (positions and QAM
symbols both carry bits) and sent through one of two schemes: embedding on
the subcarriers of an inverse transform and decoding from a few early
time-domain samples, or spreading with a short random antipodal codebook
and decoding without channel knowledge.
"""

from .channel_model import (
    ChannelRealization,
    coherence_time,
    constant_channel,
    eaui_support,
    multipath_time_channel,
    perturb_gains,
    rayleigh_freq_channel,
)
from .errors import NumericalDegeneracyError, UndecodableSupportError
from .fdst import (
    FdstConfig,
    FdstDecodeOutput,
    LatencyBreakdown,
    eaui_identify,
    fdst_decode,
    fdst_transmit,
    latency_model,
)
from .harness import (
    BlerRow,
    SchemeConfig,
    TrialRecord,
    export_dataset,
    fdst_defaults,
    run_bler,
    svc_defaults,
    write_bler_csv,
)
from .recovery import RecoveryResult, lmmse_detect, match_support_tolerant, omp
from .signal_core import (
    RngStream,
    awgn,
    dft_matrix,
    idft_matrix,
    mutual_coherence,
    partial_idft,
    qam_constellation,
    qam_demodulate,
    qam_modulate,
)
from .sparse_codec import (
    CodecConfig,
    SparseVector,
    capacity,
    decode_sparse,
    encode_sparse,
    measurement_bound,
    support_rank,
    support_unrank,
)
from .svc import (
    Codebook,
    FlopsParams,
    SvcDecodeOutput,
    flops_deep_svc,
    flops_omp,
    generate_codebook,
    load_codebook,
    save_codebook,
    svc_decode,
    svc_transmit,
)

__version__ = "0.1.0"
