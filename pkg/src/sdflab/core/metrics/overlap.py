"""Volume overlap scores."""

from sdflab.core.grid import BinaryVolume, require_same_dims
from sdflab.core.metrics.morphology import KernelRadius, contour_band


def dice(a: BinaryVolume, b: BinaryVolume) -> float:
    """``2|A n B| / (|A| + |B|)``, or 1 when both masks are empty.

    Examples:
        >>> from sdflab.core.grid import GridMeta
        >>> meta = GridMeta.of((6, 1, 1))
        >>> a = BinaryVolume.from_linear(meta, [1, 1, 1, 1, 0, 0])
        >>> b = BinaryVolume.from_linear(meta, [0, 0, 1, 1, 1, 1])
        >>> dice(a, b)
        0.5
    """
    require_same_dims(a, b, "dice")
    total = a.count() + b.count()
    if total == 0:
        return 1.0
    both = int((a.mask & b.mask).sum())
    return 2.0 * both / total


def contour_dice(
    pred: BinaryVolume, truth: BinaryVolume, radius: KernelRadius = (2, 2, 2)
) -> float:
    """Dice restricted to the contour band of ``truth``."""
    require_same_dims(pred, truth, "contour dice")
    band = contour_band(truth, radius).mask
    return dice(
        BinaryVolume.of(pred.meta, pred.mask & band),
        BinaryVolume.of(truth.meta, truth.mask & band),
    )
