"""Module containing the exceptions raised by ``switched_lindblad``."""

from __future__ import annotations

__all__: list[str] = [
    "DesignError",
    "DimensionMismatchError",
    "FixedPointNotAStateError",
    "MultipleCommonFixedPointsError",
    "NoCommonFixedPointError",
    "NotAFixedPointError",
    "NotAProjectorError",
    "NotAStateError",
    "NotHermitianError",
    "NotHurwitzError",
    "NotInvariantError",
    "NotPositiveDefiniteError",
    "NotSquareError",
    "NumericalError",
    "ScenarioFormatError",
    "SingularMatrixError",
    "StateError",
    "SwitchedLindbladError",
    "TargetMismatchError",
]


class SwitchedLindbladError(Exception):
    """Base class of all errors raised by ``switched_lindblad``."""


class NumericalError(SwitchedLindbladError):
    """A matrix violates the contract of a linear algebra primitive."""


class NotSquareError(NumericalError, ValueError):
    def __init__(self, shape: tuple[int, ...]) -> None:
        self.shape: tuple[int, ...] = shape
        super().__init__(f"Expected a square matrix, got shape {shape}")


class NotHermitianError(NumericalError, ValueError):
    def __init__(self, residual: float) -> None:
        self.residual: float = residual
        super().__init__(f"Matrix is not Hermitian (residual {residual:.3e})")


class SingularMatrixError(NumericalError):
    def __init__(self, pivot: float) -> None:
        self.pivot: float = pivot
        super().__init__(f"Matrix is singular to tolerance (pivot {pivot:.3e})")


class NotPositiveDefiniteError(NumericalError):
    """Cholesky factorization failed at the 1-based leading minor ``index``."""

    def __init__(self, index: int) -> None:
        self.index: int = index
        super().__init__(
            f"Matrix is not positive definite (leading minor {index} failed)",
        )


class StateError(SwitchedLindbladError, ValueError):
    """An operator is not a valid quantum object of the requested kind."""


class NotAStateError(StateError):
    def __init__(self, min_eigenvalue: float, detail: str = "") -> None:
        self.min_eigenvalue: float = min_eigenvalue
        message: str = f"Not a density matrix (minimum eigenvalue {min_eigenvalue:.3e})"
        super().__init__(f"{message}: {detail}" if detail else message)


class NotAProjectorError(StateError):
    def __init__(self, residual: float) -> None:
        self.residual: float = residual
        super().__init__(f"Operator is not an orthogonal projector ({residual:.3e})")


class DimensionMismatchError(StateError):
    def __init__(self, expected: int, actual: int) -> None:
        self.expected: int = expected
        self.actual: int = actual
        super().__init__(f"Dimension mismatch: expected {expected}, got {actual}")


class DesignError(SwitchedLindbladError):
    """A switching law can not be designed for the given generators."""


class NoCommonFixedPointError(DesignError):
    def __init__(self) -> None:
        super().__init__("The generators do not share a fixed point")


class MultipleCommonFixedPointsError(DesignError):
    def __init__(self, dimension: int) -> None:
        self.dimension: int = dimension
        super().__init__(
            f"The generators share a {dimension}-dimensional set of fixed points, "
            "no single state can be stabilized",
        )


class FixedPointNotAStateError(DesignError):
    def __init__(self, min_eigenvalue: float) -> None:
        self.min_eigenvalue: float = min_eigenvalue
        super().__init__(
            "The common fixed point is not a density matrix "
            f"(minimum eigenvalue {min_eigenvalue:.3e})",
        )


class NotAFixedPointError(DesignError):
    def __init__(self, index: int, residual: float) -> None:
        self.index: int = index
        self.residual: float = residual
        super().__init__(
            f"Vector is not a fixed point of generator {index} "
            f"(residual {residual:.3e})",
        )


class NotInvariantError(DesignError):
    def __init__(self, residual: float, label: str = "") -> None:
        self.residual: float = residual
        self.label: str = label
        name: str = f"'{label}' " if label else ""
        super().__init__(
            f"Generator {name}does not leave the subspace invariant "
            f"(residual {residual:.3e})",
        )


class NotHurwitzError(DesignError):
    def __init__(self, diagnostic: str) -> None:
        self.diagnostic: str = diagnostic
        super().__init__(f"Convex combination is not Hurwitz: {diagnostic}")


class TargetMismatchError(DesignError):
    def __init__(self, residual: float) -> None:
        self.residual: float = residual
        super().__init__(
            "The common fixed point of the generators is not the declared target "
            f"(distance {residual:.3e})",
        )


class ScenarioFormatError(SwitchedLindbladError, ValueError):
    def __init__(self, field: str, message: str) -> None:
        self.field: str = field
        super().__init__(f"Invalid field '{field}': {message}")
