"""sdflab - signed-distance-guided volumetric segmentation laboratory."""

__version__ = "0.1.0"
