"""Per-case evaluation, arm summaries and relative gain."""

import logging
import math
from collections.abc import Sequence
from typing import Annotated, Literal

from pydantic import BaseModel, Field, model_validator

from sdflab.core.config import EvaluationConfig
from sdflab.core.exceptions import EmptyMeshError, GainUndefinedError
from sdflab.core.grid import BinaryVolume, require_same_dims
from sdflab.core.metrics.distances import boundary_distances, surface_distances
from sdflab.core.metrics.mesh import TriMesh, extract_surface_binary, extract_surface_sdf
from sdflab.core.metrics.overlap import contour_dice, dice
from sdflab.core.net.spec import Head
from sdflab.core.net.training import Prediction

logger = logging.getLogger(__name__)

Direction = Literal["higher-better", "lower-better"]
Unit = Annotated[float, Field(ge=0, le=1)]
Distance = Annotated[float, Field(ge=0, allow_inf_nan=False)]

METRIC_DIRECTIONS: dict[str, Direction] = {
    "dice": "higher-better",
    "contour_dice": "higher-better",
    "asd": "lower-better",
    "rmsd": "lower-better",
}

REFERENCE_RESULTS: dict[str, dict[str, tuple[float, float, float]]] = {
    "synthetic": {
        "dice": (92.38, 97.08, 5.09),
        "contour_dice": (68.49, 87.69, 28.03),
        "asd": (1.573, 0.714, 54.61),
        "rmsd": (1.947, 1.018, 47.71),
    },
    "medical": {
        "dice": (89.97, 92.04, 2.30),
        "contour_dice": (63.88, 72.18, 12.99),
        "asd": (1.267, 1.097, 13.41),
        "rmsd": (2.087, 1.695, 18.78),
    },
}
"""Reference ``(pwc, pwr, gain %)`` results per dataset and metric; Dice scores in percent."""


class MetricSet(BaseModel, frozen=True):
    """Scores of one prediction against its ground truth.

    ``asd`` and ``rmsd`` are both absent when either surface is empty.

    Examples:
        >>> MetricSet(dice=1.0, contour_dice=1.0, asd=0.0, rmsd=0.0).has_distances
        True
        >>> from pydantic import ValidationError
        >>> import pytest
        >>> with pytest.raises(ValidationError):
        ...     MetricSet(dice=0.5, contour_dice=0.5, asd=2.0, rmsd=1.0)
    """

    dice: Unit
    contour_dice: Unit
    asd: Distance | None = None
    rmsd: Distance | None = None

    @model_validator(mode="after")
    def _check_distances(self) -> "MetricSet":
        if (self.asd is None) != (self.rmsd is None):
            raise ValueError("asd and rmsd must be both present or both absent")
        if self.asd is not None and self.rmsd is not None and self.rmsd < self.asd:
            raise ValueError(f"rmsd {self.rmsd} is below asd {self.asd}")
        return self

    @property
    def has_distances(self) -> bool:
        return self.asd is not None


def _prediction_surface(prediction: Prediction | BinaryVolume) -> tuple[BinaryVolume, TriMesh]:
    match prediction:
        case BinaryVolume():
            return prediction, extract_surface_binary(prediction)
        case Prediction(head=Head.PWC):
            segmentation = prediction.segmentation()
            return segmentation, extract_surface_binary(segmentation)
        case Prediction(head=Head.PWR):
            return prediction.segmentation(), extract_surface_sdf(prediction.field)
    raise TypeError(f"Unsupported prediction: {type(prediction)}")


def evaluate_case(
    prediction: Prediction | BinaryVolume,
    truth: BinaryVolume,
    config: EvaluationConfig = EvaluationConfig(),
) -> MetricSet:
    """Dice, contour Dice and symmetric surface distances for one case.

    The predicted surface is the 0.5 level of the segmentation for pwc (and
    plain masks) and the zero level of the distance field for pwr.
    """
    segmentation, predicted = _prediction_surface(prediction)
    require_same_dims(segmentation, truth, "prediction vs truth")
    overlap = dice(segmentation, truth)
    band = contour_dice(segmentation, truth, config.kernel_radius)

    if segmentation.count() == 0 or truth.count() == 0:
        logger.debug("Empty segmentation; surface distances absent")
        return MetricSet(dice=overlap, contour_dice=band)

    match config.distance_mode:
        case "mesh":
            reference = extract_surface_binary(truth)
            if predicted.is_empty or reference.is_empty:
                return MetricSet(dice=overlap, contour_dice=band)
            asd, rmsd = surface_distances(predicted, reference, config.samples_per_triangle)
        case "boundary-voxel":
            try:
                asd, rmsd = boundary_distances(segmentation, truth)
            except EmptyMeshError as e:
                logger.debug("No boundary voxels on side %s; surface distances absent", e.side)
                return MetricSet(dice=overlap, contour_dice=band)
    return MetricSet(dice=overlap, contour_dice=band, asd=asd, rmsd=rmsd)


def gain(pwc: float, pwr: float, direction: Direction) -> float:
    """Relative improvement of pwr over pwc, in percent.

    Raises:
        GainUndefinedError: If ``pwc`` is zero

    Examples:
        >>> round(gain(92.38, 97.08, "higher-better"), 2)
        5.09
        >>> round(gain(1.573, 0.714, "lower-better"), 2)
        54.61
        >>> gain(3.0, 3.0, "lower-better")
        0.0
    """
    if pwc == 0:
        raise GainUndefinedError("Gain is undefined for a zero pwc baseline")
    match direction:
        case "higher-better":
            return 100.0 * (pwr - pwc) / pwc
        case "lower-better":
            return 100.0 * (pwc - pwr) / pwc
        case _:
            raise ValueError(f"Unsupported gain direction: {direction}")


class ArmSummary(BaseModel, frozen=True):
    """Means over the test cases of one arm.

    Distance means cover only cases whose surfaces exist; ``distance_cases``
    counts them.
    """

    cases: int
    dice: float
    contour_dice: float
    asd: float | None = None
    rmsd: float | None = None
    distance_cases: int = 0

    def value(self, metric: str) -> float | None:
        return getattr(self, metric)


def summarize(metrics: Sequence[MetricSet]) -> ArmSummary:
    """Mean metrics of one arm.

    Examples:
        >>> summary = summarize([
        ...     MetricSet(dice=1.0, contour_dice=0.5, asd=1.0, rmsd=1.0),
        ...     MetricSet(dice=0.0, contour_dice=0.0),
        ... ])
        >>> summary.dice, summary.asd, summary.distance_cases
        (0.5, 1.0, 1)
    """
    if not metrics:
        raise ValueError("Cannot summarize an empty metric list")
    n = len(metrics)
    with_distances = [m for m in metrics if m.has_distances]
    asd = rmsd = None
    if with_distances:
        asd = math.fsum(m.asd or 0.0 for m in with_distances) / len(with_distances)
        rmsd = math.fsum(m.rmsd or 0.0 for m in with_distances) / len(with_distances)
    return ArmSummary(
        cases=n,
        dice=math.fsum(m.dice for m in metrics) / n,
        contour_dice=math.fsum(m.contour_dice for m in metrics) / n,
        asd=asd,
        rmsd=rmsd,
        distance_cases=len(with_distances),
    )


def pwr_wins(pwc: ArmSummary, pwr: ArmSummary, metric: str) -> bool | None:
    """Whether pwr beats pwc on ``metric``; None when either value is missing."""
    a, b = pwc.value(metric), pwr.value(metric)
    if a is None or b is None:
        return None
    match METRIC_DIRECTIONS[metric]:
        case "higher-better":
            return b > a
        case "lower-better":
            return b < a
