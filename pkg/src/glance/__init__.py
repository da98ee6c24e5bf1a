"""Zero-order binary image features.

Computes how tightly foreground packs an image (information packing
factor), how compact it is within its own row spans (compactness and
scatterness), and how much background it traps (porousness and per-pore
statistics), from PGM or delimited grid inputs. Ships with a synthetic
phantom oracle, slice-series anomaly flagging, and a small feature
classifier.
"""

from .binarize import ThresholdConfig, ThresholdMode, binarize, otsu_from_histogram, otsu_threshold
from .classifier import (
    ConfusionMatrix,
    NetworkModel,
    SplitDataset,
    TrialSummary,
    evaluate,
    predict,
    run_trials,
    split,
    train,
    trials_csv,
)
from .errors import (
    DatasetTooSmallError,
    DegenerateHistogramError,
    DimensionMismatchError,
    EmptyForegroundError,
    EmptyInputError,
    GlanceError,
    InconsistentCountsError,
    MalformedHeaderError,
    PhantomBoundsError,
    RaggedRowsError,
    SeriesTooShortError,
    SingleClassTrainError,
    TruncatedDataError,
    UnsupportedMagicError,
    ValueOutOfRangeError,
)
from .features import (
    Combo,
    FEATURE_CSV_HEADER,
    FeatureRecord,
    SeriesReport,
    average_pore_area,
    combo,
    compactness,
    extract,
    flag_anomalies,
    ipf,
    porousness,
    records_to_csv,
    records_to_json,
    scatterness,
)
from .grid import (
    Axis,
    BinaryImage,
    GrayImage,
    Polarity,
    Rotation,
    dump_grid_csv,
    dump_pgm,
    flip,
    load_grid_csv,
    load_pgm,
    rotate,
)
from .phantom import (
    LabeledDataset,
    PhantomKind,
    PhantomSpec,
    generate,
    generate_dataset,
    generate_dataset_images,
    generate_series,
    to_two_classes,
)
from .pores import Pore, PoreMap, exterior_mask, label_pores, per_pore_table, pore_table_csv
from .report import render_series_figures
from .tabulate import RowCounts, RowTabulation, row_tabulation

__version__ = "0.1.0"

__all__ = [
    "Axis",
    "BinaryImage",
    "Combo",
    "ConfusionMatrix",
    "DatasetTooSmallError",
    "DegenerateHistogramError",
    "DimensionMismatchError",
    "EmptyForegroundError",
    "EmptyInputError",
    "FEATURE_CSV_HEADER",
    "FeatureRecord",
    "GlanceError",
    "GrayImage",
    "InconsistentCountsError",
    "LabeledDataset",
    "MalformedHeaderError",
    "NetworkModel",
    "PhantomBoundsError",
    "PhantomKind",
    "PhantomSpec",
    "Polarity",
    "Pore",
    "PoreMap",
    "RaggedRowsError",
    "Rotation",
    "RowCounts",
    "RowTabulation",
    "SeriesReport",
    "SeriesTooShortError",
    "SingleClassTrainError",
    "SplitDataset",
    "ThresholdConfig",
    "ThresholdMode",
    "TrialSummary",
    "TruncatedDataError",
    "UnsupportedMagicError",
    "ValueOutOfRangeError",
    "average_pore_area",
    "binarize",
    "combo",
    "compactness",
    "dump_grid_csv",
    "dump_pgm",
    "evaluate",
    "exterior_mask",
    "extract",
    "flag_anomalies",
    "flip",
    "generate",
    "generate_dataset",
    "generate_dataset_images",
    "generate_series",
    "ipf",
    "label_pores",
    "load_grid_csv",
    "load_pgm",
    "otsu_from_histogram",
    "otsu_threshold",
    "per_pore_table",
    "pore_table_csv",
    "porousness",
    "predict",
    "records_to_csv",
    "records_to_json",
    "render_series_figures",
    "rotate",
    "row_tabulation",
    "run_trials",
    "scatterness",
    "split",
    "to_two_classes",
    "train",
    "trials_csv",
    "__version__",
]
