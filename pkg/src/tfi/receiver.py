"""Reception pipelines: the overclocked receiver and the standard 1x baseline.

Oversampling geometry. The transmitter emits at Fs; the receiver samples at
G*Fs, so every base-rate sample interval holds G stream samples. Anchored
at a base-rate symbol boundary b (an oversampled index), copy q is taken as
stream[b + n*G - q]: copy 0 is the base-rate stream itself and copy q>0 is
the same waveform sampled q/G of a sample earlier, i.e. a fractionally
delayed replica drawn from the cyclic prefix at the window edge. On bin l
(signed index) copy q then shows the linear phase ramp

    Y_q[l] = Y_0[l] * exp(-j 2 pi q l / (F G)),

which compensate_overclock_phase removes. After compensation the copies are
G observations of the same symbol whose noise components are independent
when the receiver front-end is wideband, so averaging them buys up to
10*log10(G) dB of SNR.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .channel import apply_cfo
from .config import OfdmConfig
from .detect import Detection, DetectorConfig, detect_packet, normalize_for_detection
from .framing import FrameBlueprint
from .modulation import demap_nearest, get_constellation
from .preamble import PreambleSpec, default_preamble, gen_ltf
from .transforms import default_pilots, xcorr

SYNC_BACKOFF = 2  # base samples retreated into the CP before each FFT window


class SyncWindowError(ValueError):
    """The sync search window does not fit in the captured stream."""


class PilotErasureError(ValueError):
    """Pilot reference energy too small to track phase."""


class DegenerateSymbolError(ValueError):
    """Fine CFO objective is non-finite."""


@dataclass(frozen=True)
class ChannelEstimate:
    h_hat: np.ndarray              # (F,) complex, zero on unused bins
    per_bin_noise_var: np.ndarray  # (F,) real, nonnegative
    per_copy_var: np.ndarray       # (G,) mean residual power per copy


@dataclass
class RxDiagnostics:
    g: int
    detected: bool = False
    missed: bool = False
    detect_index: int | None = None
    sync_index: int | None = None
    sync_residue: float = 0.0
    sync_error: int | None = None
    sync_error_samples: float | None = None  # full-resolution timing error
    cfo_coarse_hz: float | None = None
    cfo_fine_hz: float | None = None
    cfo_error_hz: float | None = None
    decoded_bits: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.uint8))
    n_bits: int = 0
    n_bit_errors: int = 0
    ber: float = float("nan")
    per_copy_evm: np.ndarray | None = None
    error: str | None = None


@dataclass(frozen=True)
class TrialTruth:
    """Ground truth carried alongside a capture for scoring."""

    payload_bits: np.ndarray
    tx_grids: np.ndarray
    ltf_start_over: float  # oversampled index of the LTF field start
    cfo_hz: float

    @classmethod
    def from_blueprint(cls, blueprint: FrameBlueprint, scenario) -> "TrialTruth":
        from .channel import true_ltf_start

        return cls(
            payload_bits=blueprint.payload_bits,
            tx_grids=blueprint.tx_grids,
            ltf_start_over=true_ltf_start(blueprint, scenario),
            cfo_hz=scenario.cfo_hz,
        )


@dataclass(frozen=True)
class GenieAids:
    """Replace estimation stages with ground truth (ablation/oracle runs)."""

    timing: bool = False
    cfo: bool = False
    channel: bool = False
    phase: bool = False
    taps: np.ndarray | None = None  # oversampled-rate taps for the known channel


# ---------------------------------------------------------------------------
# polyphase structure


def polyphase_split(stream, g: int) -> np.ndarray:
    """copies[q][n] = stream[n*g + q]; lossless reshaping of the stream."""
    stream = np.asarray(stream)
    if stream.size % g:
        raise ValueError(f"stream length {stream.size} not divisible by {g}")
    return stream.reshape(-1, g).T.copy()


def interleave_copies(copies) -> np.ndarray:
    """Inverse of polyphase_split."""
    copies = np.asarray(copies)
    return copies.T.reshape(-1).copy()


def delayed_copies(stream, start: int, g: int, n: int = 64,
                   count: int = 1, stride: int | None = None) -> np.ndarray:
    """Copy matrix anchored at base boundaries: out[c,q,i] = stream[b_c + i*g - q].

    b_c = start + c*stride; copy q>0 reads q oversamples earlier than copy 0,
    drawing its first samples from the cyclic prefix.
    """
    stream = np.asarray(stream)
    stride = 0 if stride is None else stride
    c = np.arange(count)[:, None, None]
    q = np.arange(g)[None, :, None]
    i = np.arange(n)[None, None, :]
    idx = start + c * stride + i * g - q
    if idx.min() < 0 or idx.max() >= stream.size:
        raise SyncWindowError("symbol window extends past the captured stream")
    return stream[idx]


def compensate_overclock_phase(spectrum, copy_idx: int, g: int,
                               cfg: OfdmConfig) -> np.ndarray:
    """Undo the copy's oversampling phase ramp: bin l *= e^{+j2pi q l/(F G)}."""
    spectrum = np.asarray(spectrum, dtype=complex)
    if copy_idx == 0:
        return spectrum.copy()
    l = cfg.signed_index_grid()
    return spectrum * np.exp(2j * np.pi * copy_idx * l / (cfg.num_subcarriers * g))


def _comp_matrix(g: int, cfg: OfdmConfig) -> np.ndarray:
    """(G, F) matrix of per-copy compensation phasors."""
    l = cfg.signed_index_grid()[None, :]
    q = np.arange(g)[:, None]
    return np.exp(2j * np.pi * q * l / (cfg.num_subcarriers * g))


# ---------------------------------------------------------------------------
# synchronization and CFO


def sync_timing(stream_over, search: tuple[int, int], cfg: OfdmConfig,
                template: np.ndarray | None = None) -> tuple[int, float]:
    """Locate the LTF by cross-correlation against the oversampled reference.

    search = (lo, hi) bounds the candidate start lags (oversampled). Returns
    the lag maximizing |correlation| and the sub-sample residue lag/G mod 1.
    """
    stream_over = np.asarray(stream_over, dtype=complex)
    g = cfg.overclock
    if template is None:
        template = gen_ltf(cfg, g)
    lo, hi = search
    lo = max(0, int(lo))
    hi = min(int(hi), stream_over.size - template.size)
    if hi <= lo:
        raise SyncWindowError(f"sync window [{lo}, {hi}) too short for the reference")
    corr = xcorr(stream_over[lo: hi + template.size], template)
    lag = lo + int(np.argmax(np.abs(corr[: hi - lo])))
    return lag, (lag % g) / g


def estimate_cfo_coarse(ltf_copy0, fs: float, cfg: OfdmConfig) -> float:
    """CFO from the phase drift between the two identical LTF symbols.

    ltf_copy0: 160 base-rate samples of the synchronized LTF field (guard +
    two symbols). Unambiguous range |cfo| < fs / (2*F).
    """
    y = np.asarray(ltf_copy0, dtype=complex)
    f = cfg.num_subcarriers
    guard = 2 * cfg.cp_len
    a = y[guard: guard + f]
    b = y[guard + f: guard + 2 * f]
    rot = np.sum(b * np.conj(a))
    return float(np.angle(rot) * fs / (2 * np.pi * f))


def cfo_objective(copies, f_hz: float, fs: float, cfg: OfdmConfig,
                  offsets=None) -> float:
    """Copy-consistency cost of a CFO hypothesis.

    copies is (G, N) for one symbol, or (S, G, N) for S repetitions of the
    same symbol content (e.g. the two identical LTF symbols) whose base-rate
    offsets are given by `offsets`. After removing the hypothesized
    per-sample rotation, every phase-compensated copy must match the
    reference copy up to the deterministic CFO phasor
    e^{-j 2 pi f (offset_s - q/G) / fs}; the cost is the summed squared
    mismatch over all non-reference copies. Exactly zero at the true CFO on
    noiseless input.
    """
    copies = np.asarray(copies, dtype=complex)
    if copies.ndim == 2:
        copies = copies[None, :, :]
        offsets = np.zeros(1)
    elif offsets is None:
        raise ValueError("stacked copies need per-repetition offsets")
    s, g, n_len = copies.shape
    offsets = np.asarray(offsets, dtype=float)
    n = np.arange(n_len)
    derot = np.exp(-2j * np.pi * f_hz * n / fs)
    spec = np.fft.fft(copies * derot[None, None, :], axis=-1)
    spec = spec * _comp_matrix(g, cfg)[None, :, :]
    q = np.arange(g)[None, :]
    scal = np.exp(-2j * np.pi * f_hz * (offsets[:, None] - q / g) / fs)
    aligned = spec * scal[:, :, None]
    diff = aligned.reshape(s * g, n_len)[1:] - aligned[0, 0][None, :]
    j = float(np.sum(np.abs(diff) ** 2))
    if not math.isfinite(j):
        raise DegenerateSymbolError("degenerate symbol: non-finite CFO objective")
    return j


def estimate_cfo_fine(copies, f_coarse: float, fs: float, cfg: OfdmConfig,
                      offsets=None, bracket_hz: float = 2000.0,
                      tol_hz: float = 0.5) -> float:
    """Refine the CFO by minimizing cfo_objective over a bracket around the
    coarse estimate (golden-section search to tol_hz resolution). At G=1
    with a single repetition the coarse value is returned unchanged."""
    copies = np.asarray(copies, dtype=complex)
    if copies.ndim == 2 and copies.shape[0] == 1:
        return f_coarse
    invphi = (math.sqrt(5.0) - 1) / 2
    a = f_coarse - bracket_hz
    b = f_coarse + bracket_hz
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    jc = cfo_objective(copies, c, fs, cfg, offsets)
    jd = cfo_objective(copies, d, fs, cfg, offsets)
    while b - a > tol_hz:
        if jc < jd:
            b, d, jd = d, c, jc
            c = b - invphi * (b - a)
            jc = cfo_objective(copies, c, fs, cfg, offsets)
        else:
            a, c, jc = c, d, jd
            d = a + invphi * (b - a)
            jd = cfo_objective(copies, d, fs, cfg, offsets)
    return (a + b) / 2


# ---------------------------------------------------------------------------
# channel estimation, pilot tracking, combining


def estimate_channel(ltf_spectra, preamble: PreambleSpec,
                     cfg: OfdmConfig) -> ChannelEstimate:
    """Least-squares channel estimate from compensated LTF spectra.

    ltf_spectra: (n_sym, G, F) phase-compensated spectra of the LTF symbols.
    h_hat on an LTF tone is the mean of Y/LTF over the 2G observations;
    per-bin noise variance is the sample variance of the residuals. Payload
    tones outside the LTF support (the +-27, +-28 edge tones) inherit the
    estimate of the nearest LTF tone.
    """
    spectra = np.asarray(ltf_spectra, dtype=complex)
    n_obs = spectra.shape[0] * spectra.shape[1]
    f = cfg.num_subcarriers
    ltf = preamble.ltf_freq_seq
    bins = preamble.ltf_bins
    obs = spectra.reshape(n_obs, f)[:, bins] / ltf[bins][None, :]
    h_bins = obs.mean(axis=0)
    residual = (obs - h_bins[None, :]) * ltf[bins][None, :]
    ddof = 1 if n_obs > 1 else 0
    var_bins = np.sum(np.abs(residual) ** 2, axis=0) / max(1, n_obs - ddof)

    h_hat = np.zeros(f, dtype=complex)
    noise_var = np.zeros(f)
    h_hat[bins] = h_bins
    noise_var[bins] = var_bins

    # Payload tones outside the LTF support: continue the channel from the
    # band edge using the average per-tone phase step of the whole estimate,
    # so the linear phase of any timing offset (including the CP backoff)
    # extrapolates exactly and the step estimate stays quiet under noise.
    signed = cfg.signed_index_grid()
    ltf_signed = sorted(int(signed[b]) for b in bins)
    lo_edge, hi_edge = ltf_signed[0], ltf_signed[-1]

    acc = 0.0 + 0.0j
    for a, b_ in zip(ltf_signed[:-1], ltf_signed[1:]):
        if b_ - a == 1:
            acc += h_hat[b_ % f] * np.conj(h_hat[a % f])
    step = acc / abs(acc) if abs(acc) > 1e-30 else 1.0 + 0.0j

    for l in cfg.occupied_subcarriers:
        if lo_edge <= l <= hi_edge:
            continue
        if l > hi_edge:
            h_hat[l % f] = h_hat[hi_edge % f] * step ** (l - hi_edge)
            noise_var[l % f] = noise_var[hi_edge % f]
        else:
            h_hat[l % f] = h_hat[lo_edge % f] * np.conj(step) ** (lo_edge - l)
            noise_var[l % f] = noise_var[lo_edge % f]

    per_copy = np.mean(
        np.abs((spectra[:, :, bins] / ltf[bins][None, None, :]) - h_bins[None, None, :]) ** 2,
        axis=(0, 2),
    ) * np.mean(np.abs(ltf[bins]) ** 2)
    return ChannelEstimate(h_hat=h_hat, per_bin_noise_var=noise_var, per_copy_var=per_copy)


def track_pilot_phase(spectrum, h_hat, cfg: OfdmConfig,
                      pilot_values: np.ndarray | None = None):
    """Estimate and remove the common phase of one symbol from its pilots.

    Returns (corrected spectrum, theta). Raises PilotErasureError when the
    pilot reference carries no energy.
    """
    spectrum = np.asarray(spectrum, dtype=complex)
    if pilot_values is None:
        pilot_values = default_pilots(cfg)
    pbins = cfg.bins(cfg.pilot_subcarriers)
    ref = np.asarray(h_hat)[pbins] * pilot_values
    if np.sum(np.abs(ref) ** 2) < 1e-12:
        raise PilotErasureError("pilot erasure: reference energy below 1e-12")
    theta = float(np.angle(np.sum(spectrum[..., pbins] * np.conj(ref))))
    return spectrum * np.exp(-1j * theta), theta


def combine_copies(spectra, weights: str = "uniform",
                   per_copy_var: np.ndarray | None = None) -> np.ndarray:
    """Average compensated copies; optionally weight by inverse LTF residual
    variance."""
    spectra = np.asarray(spectra, dtype=complex)
    if spectra.ndim == 1:
        return spectra.copy()
    if weights == "uniform":
        return spectra.mean(axis=0)
    if weights == "inverse_variance":
        if per_copy_var is None:
            raise ValueError("inverse_variance weighting needs per-copy variances")
        w = 1.0 / np.maximum(np.asarray(per_copy_var, dtype=float), 1e-30)
        w = w / w.sum()
        return np.tensordot(w, spectra, axes=(0, 0))
    raise ValueError(f"unknown combining weights {weights!r}")


# ---------------------------------------------------------------------------
# full pipelines


def _known_channel_response(taps, g: int, cfg: OfdmConfig) -> np.ndarray:
    """Frequency response of oversampled-rate taps on the base-rate grid."""
    taps = np.asarray(taps, dtype=complex)
    l = cfg.signed_index_grid()
    k = np.arange(taps.size)
    f = cfg.num_subcarriers
    return (taps[None, :] * np.exp(-2j * np.pi * l[:, None] * k[None, :] / (f * g))).sum(axis=1)


def receive_frame(stream_over, cfg: OfdmConfig, scheme, n_symbols: int, *,
                  detector: DetectorConfig | None = None,
                  preamble: PreambleSpec | None = None,
                  combining: str = "uniform",
                  truth: TrialTruth | None = None,
                  genie: GenieAids | None = None) -> RxDiagnostics:
    """Run the overclocked reception pipeline on a captured stream at G*Fs."""
    scheme = get_constellation(scheme)
    stream = np.asarray(stream_over, dtype=complex)
    g = cfg.overclock
    fs = cfg.base_rate
    f = cfg.num_subcarriers
    sym = cfg.symbol_len
    detector = detector or DetectorConfig()
    preamble = preamble or default_preamble(cfg)
    genie = genie or GenieAids()
    diag = RxDiagnostics(g=g)

    # --- packet detection at the base rate (polyphase-0 models 1x listening)
    base = stream[::g]
    det: Detection | None = None
    if not genie.timing:
        det = detect_packet(normalize_for_detection(base), detector)
        if det is None:
            diag.missed = True
            if truth is not None:
                diag.n_bits = truth.payload_bits.size
                diag.n_bit_errors = diag.n_bits
                diag.ber = 1.0
            return diag
        diag.detected = True
        diag.detect_index = det.index

    # --- clock switch emulation + LTF timing sync on the oversampled stream
    stf_len = 2 * sym
    ltf_len = 2 * sym
    template_len = ltf_len * g
    if genie.timing:
        if truth is None:
            raise ValueError("genie timing needs ground truth")
        m_hat = int(round(truth.ltf_start_over))
        diag.detected = True
    else:
        assert det is not None
        lo = max(0, (det.index - 16) * g)
        hi = (det.index + 3 * stf_len) * g
        search_stream = stream
        if g > 1:
            switch_over = (det.decision_index
                           + math.ceil(detector.clock_switch_latency * fs)) * g
            if switch_over > lo:
                search_stream = stream.copy()
                search_stream[:switch_over] = 0.0
        m_hat, diag.sync_residue = sync_timing(
            search_stream, (lo, hi), cfg, template=gen_ltf(cfg, g))
    diag.sync_index = m_hat
    if truth is not None:
        # Timing error in base-rate samples; the sub-sample part is what the
        # finer G-grid buys, so it is kept alongside the integer decision.
        diag.sync_error_samples = (m_hat - truth.ltf_start_over) / g
        diag.sync_error = int(round(diag.sync_error_samples))

    # --- coarse CFO from the polyphase-0 copy of the LTF
    ltf0 = stream[m_hat: m_hat + ltf_len * g: g]
    if ltf0.size < ltf_len:
        raise SyncWindowError("stream ends inside the LTF")
    cfo = estimate_cfo_coarse(ltf0, fs, cfg)
    diag.cfo_coarse_hz = cfo

    payload_start = m_hat + (ltf_len + cfg.cp_len - SYNC_BACKOFF) * g

    # --- fine CFO (G >= 2) from all 2G copies of the repeated LTF symbols
    ltf_body_start = m_hat + (2 * cfg.cp_len - SYNC_BACKOFF) * g
    if genie.cfo:
        if truth is None:
            raise ValueError("genie cfo needs ground truth")
        cfo_fine = truth.cfo_hz
    elif g >= 2:
        ltf_raw = delayed_copies(stream, ltf_body_start, g, f, count=2, stride=f * g)
        cfo_fine = estimate_cfo_fine(ltf_raw, cfo, fs, cfg, offsets=(0.0, float(f)))
    else:
        cfo_fine = cfo
    diag.cfo_fine_hz = cfo_fine
    if truth is not None:
        diag.cfo_error_hz = cfo_fine - truth.cfo_hz

    stream = apply_cfo(stream, -cfo_fine, fs * g)

    # --- channel estimation from the two LTF symbols, all copies
    ltf_copies = delayed_copies(stream, ltf_body_start, g, f, count=2, stride=f * g)
    ltf_spec = np.fft.fft(ltf_copies, axis=-1) * _comp_matrix(g, cfg)[None, :, :]
    est = estimate_channel(ltf_spec, preamble, cfg)
    if genie.channel:
        # The analytic response must carry the deterministic linear phase of
        # the CP backoff the estimator would otherwise absorb. Genie runs
        # assume integer-aligned captures (timing_frac == 0).
        taps = genie.taps if genie.taps is not None else np.array([1.0 + 0j])
        h_known = _known_channel_response(taps, g, cfg)
        l = cfg.signed_index_grid()
        h_known = h_known * np.exp(-2j * np.pi * l * SYNC_BACKOFF / f)
        mask = np.zeros(f, dtype=bool)
        mask[cfg.bins(cfg.occupied_subcarriers)] = True
        mask[preamble.ltf_bins] = True
        est = ChannelEstimate(h_hat=np.where(mask, h_known, 0.0),
                              per_bin_noise_var=est.per_bin_noise_var,
                              per_copy_var=est.per_copy_var)

    # --- payload: per symbol and copy, FFT -> compensate -> pilot -> combine
    copies = delayed_copies(stream, payload_start, g, f,
                            count=n_symbols, stride=sym * g)
    spectra = np.fft.fft(copies, axis=-1) * _comp_matrix(g, cfg)[None, :, :]

    if not genie.phase:
        # One common phase per symbol, pooled over every copy's pilots: the
        # redundant pilot observations sharpen the estimate by up to G.
        pilot_values = default_pilots(cfg)
        pbins = cfg.bins(cfg.pilot_subcarriers)
        ref = est.h_hat[pbins] * pilot_values
        if np.sum(np.abs(ref) ** 2) < 1e-12:
            raise PilotErasureError("pilot erasure: reference energy below 1e-12")
        rot = np.sum(spectra[:, :, pbins] * np.conj(ref)[None, None, :], axis=(1, 2))
        theta = np.angle(rot)
        spectra = spectra * np.exp(-1j * theta)[:, None, None]

    combined = combine_copies(
        spectra.transpose(1, 0, 2), combining, per_copy_var=est.per_copy_var
    ) if g > 1 else spectra[:, 0, :]

    dbins = cfg.bins(cfg.data_subcarriers)
    h_data = est.h_hat[dbins]
    eq = combined[:, dbins] / h_data[None, :]
    bits = demap_nearest(eq.ravel(), scheme)

    diag.decoded_bits = bits
    if truth is not None:
        n = truth.payload_bits.size
        diag.n_bits = n
        diag.n_bit_errors = int(np.sum(bits[:n] != truth.payload_bits))
        diag.ber = diag.n_bit_errors / n
        tx_data = truth.tx_grids[:, dbins]
        per_copy_eq = spectra[:, :, dbins] / h_data[None, None, :]
        err = per_copy_eq - tx_data[:, None, :]
        diag.per_copy_evm = np.sqrt(np.mean(np.abs(err) ** 2, axis=(0, 2)))
    return diag


def receive_frame_baseline(stream_over, cfg: OfdmConfig, scheme, n_symbols: int, *,
                           detector: DetectorConfig | None = None,
                           preamble: PreambleSpec | None = None,
                           truth: TrialTruth | None = None,
                           genie: GenieAids | None = None) -> RxDiagnostics:
    """Standard 1x receiver: the identical pipeline restricted to polyphase-0."""
    stream = np.asarray(stream_over, dtype=complex)
    g = cfg.overclock
    cfg1 = replace(cfg, overclock=1)
    truth1 = truth
    if truth is not None and g > 1:
        truth1 = replace(truth, ltf_start_over=truth.ltf_start_over / g)
    return receive_frame(stream[::g], cfg1, scheme, n_symbols,
                         detector=detector, preamble=preamble,
                         combining="uniform", truth=truth1, genie=genie)
