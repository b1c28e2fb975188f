"""Baseband OFDM simulator with an overclocked receiver and a 1x baseline.

The transmitter and channel run at the base rate Fs; the receiver may
sample at G*Fs (G in {1, 2, 4, 8}) and exploits the deterministic phase
relation between its G polyphase copies to improve timing sync, CFO
estimation, and demodulation at low SNR.
"""

from ._kernels import HAVE_COMPILED
from .channel import ChannelScenario, apply_cfo, apply_multipath, apply_scenario, taps_preset
from .config import DEFAULT_CONFIG, OfdmConfig
from .detect import DetectorConfig, calibrate_energy_threshold, detect_packet
from .framing import FrameBlueprint, build_frame
from .harness import SweepSpec, make_trial, run_point, run_sweep, run_trial
from .iqfile import IqMeta, read_iq_capture, write_iq_capture
from .modulation import CONSTELLATIONS, Constellation, demap_nearest, get_constellation, map_bits
from .preamble import PreambleSpec, default_preamble, gen_ltf, gen_stf
from .receiver import (ChannelEstimate, GenieAids, RxDiagnostics, TrialTruth,
                       combine_copies, compensate_overclock_phase, delayed_copies,
                       estimate_cfo_coarse, estimate_cfo_fine, estimate_channel,
                       polyphase_split, receive_frame, receive_frame_baseline,
                       sync_timing, track_pilot_phase)
from .results import SweepResultRow, emit_results
from .transforms import assemble_symbol, fft, ifft, upsample_bandlimited

__version__ = "0.1.0"
