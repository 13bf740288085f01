"""Python bindings for the localgcl C++ core."""

from ._core import (
    ConfigError,
    DataError,
    Dataset,
    DivergedError,
    Graph,
    LocalGCLError,
    ModelParams,
    default_config,
    embed,
    linear_probe,
    load_checkpoint,
    load_dataset,
    nt_xent,
    parse_tudataset,
    save_checkpoint,
    synthesize_degree_features,
    train,
)

__all__ = [
    "ConfigError",
    "DataError",
    "Dataset",
    "DivergedError",
    "Graph",
    "LocalGCLError",
    "ModelParams",
    "default_config",
    "embed",
    "linear_probe",
    "load_checkpoint",
    "load_dataset",
    "nt_xent",
    "parse_tudataset",
    "save_checkpoint",
    "synthesize_degree_features",
    "train",
]
