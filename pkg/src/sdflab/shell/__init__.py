"""Shell layer: file formats, dataset generation, reports and pipeline stages.

The modules here do all reading and writing; computation lives in
``sdflab.core``.
"""

from .dataset import DatasetManifest, ManifestEntry, generate_dataset, read_manifest, write_manifest
from .obj_export import read_obj, write_obj
from .params_io import read_params, write_params
from .report_generator import RunReport, generate_markdown_report, write_report
from .vvol import read_binary, read_scalar, read_volume, write_volume

__all__ = [
    "DatasetManifest",
    "ManifestEntry",
    "generate_dataset",
    "read_manifest",
    "write_manifest",
    "read_obj",
    "write_obj",
    "read_params",
    "write_params",
    "RunReport",
    "generate_markdown_report",
    "write_report",
    "read_binary",
    "read_scalar",
    "read_volume",
    "write_volume",
]
