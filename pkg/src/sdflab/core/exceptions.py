"""Exception hierarchy shared by every sdflab module."""

from pathlib import Path


class SdfLabError(Exception):
    """Base class for all sdflab errors."""

    pass


class VolumeFormatError(SdfLabError):
    """Raised when a VVOL file cannot be decoded."""

    def __init__(self, path: str | Path, message: str):
        self.path = str(path)
        super().__init__(f"{self.path}: {message}")


class BadMagicError(VolumeFormatError):
    """Raised when a file does not start with the VVOL magic."""

    pass


class HeaderError(VolumeFormatError):
    """Raised when the VVOL header is missing keys or is not valid JSON."""

    pass


class TruncatedPayloadError(VolumeFormatError):
    """Raised when the file ends before the declared payload does."""

    pass


class UnknownDtypeError(VolumeFormatError):
    """Raised when the header declares a dtype other than u8 or f32."""

    pass


class PayloadLengthError(VolumeFormatError):
    """Raised when the payload is longer than the declared dims allow."""

    pass


class VolumeIOError(SdfLabError):
    """Raised when a volume file cannot be read or written."""

    def __init__(self, path: str | Path, cause: Exception):
        self.path = str(path)
        self.cause = cause
        super().__init__(f"I/O failure on {self.path}: {cause}")


class NonFiniteVolumeError(SdfLabError):
    """Raised when a scalar volume would hold NaN or infinite values."""

    pass


class ShapeMismatchError(SdfLabError):
    """Raised when two arrays or volumes disagree in shape."""

    def __init__(self, what: str, lhs: object, rhs: object):
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"{what}: shape {lhs} does not match {rhs}")


class InvalidShapeError(SdfLabError):
    """Raised when a shape description cannot be evaluated."""

    pass


class EmptyVoxelizationError(SdfLabError):
    """Raised when repeated draws keep producing an empty volume."""

    pass


class EmptyMaskError(SdfLabError):
    """Raised when a distance transform has no seed voxels to measure from."""

    pass


class NonFiniteLossError(SdfLabError):
    """Raised when training produces a NaN or infinite loss."""

    def __init__(self, epoch: int, case_id: str, loss: float):
        self.epoch = epoch
        self.case_id = case_id
        self.loss = loss
        super().__init__(
            f"Non-finite loss {loss} at epoch {epoch} on case '{case_id}'"
        )


class EmptyMeshError(SdfLabError):
    """Raised when a surface distance is requested against an empty mesh."""

    def __init__(self, side: str):
        self.side = side
        super().__init__(f"Mesh {side} is empty")


class GainUndefinedError(SdfLabError):
    """Raised when a relative gain is requested against a zero baseline."""

    pass


class MissingPredictionError(SdfLabError):
    """Raised when evaluation finds test cases without predictions."""

    def __init__(self, arm: str, case_ids: list[str]):
        self.arm = arm
        self.case_ids = case_ids
        super().__init__(
            f"Missing {arm} predictions for cases: {', '.join(case_ids)}"
        )


class ParamsFormatError(SdfLabError):
    """Raised when a parameter file cannot be decoded."""

    pass
