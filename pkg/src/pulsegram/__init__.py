"""Heart-rate estimation from event-camera recordings of the wrist.

The estimator scans a recording for the square region with the highest
event activity, splits it into small tiles, turns each tile's events
into a 50 Hz count signal and reads the pulse off the dominant in-band
frequency of the per-tile power spectra. A synthetic pulsatile-event
generator provides ground truth for testing, and an evaluation harness
aggregates detected-vs-actual errors over whole datasets.
"""

from ._kernels import BACKEND
from .aoi import (AreaOfInterest, Heatmap, TileGrid, compute_heatmap,
                  find_aoi, tile_aoi)
from .errors import PulsegramError
from .events import (DEFAULT_GEOMETRY, Condition, Event, EventStream,
                     Polarity, RecordingMeta, SensorGeometry, build_stream,
                     duration_s, from_arrays)
from .evaluation import (EvalPair, EvalReport, evaluate_manifest,
                         evaluate_pairs, load_table_pairs, mae, rmse)
from .io import (GroundTruthRecord, load_events, parse_csv_events,
                 parse_ground_truth, parse_paren_events, save_events,
                 write_csv_events, write_paren_events)
from .pipeline import (DEFAULT_CONFIG, HrEstimate, NdReason, PipelineConfig,
                       estimate_hr)
from .spectral import (Periodogram, PolarityMode, TileSeries, TileVote,
                       Window, bin_events, dominant_frequency, periodogram)
from .synth import SynthConfig, generate

__version__ = "0.1.0"

__all__ = [
    "AreaOfInterest", "BACKEND", "Condition", "DEFAULT_CONFIG",
    "DEFAULT_GEOMETRY", "EvalPair", "EvalReport", "Event", "EventStream",
    "GroundTruthRecord", "Heatmap", "HrEstimate", "NdReason", "Periodogram",
    "PipelineConfig", "Polarity", "PolarityMode", "PulsegramError",
    "RecordingMeta", "SensorGeometry", "SynthConfig", "TileGrid",
    "TileSeries", "TileVote", "Window", "bin_events", "build_stream",
    "compute_heatmap", "dominant_frequency", "duration_s", "estimate_hr",
    "evaluate_manifest", "evaluate_pairs", "find_aoi", "from_arrays",
    "generate", "load_events", "load_table_pairs", "mae", "parse_csv_events",
    "parse_ground_truth", "parse_paren_events", "periodogram", "rmse",
    "save_events", "tile_aoi", "write_csv_events", "write_paren_events",
]
