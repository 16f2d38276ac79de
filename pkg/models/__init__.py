# Models package

from .superalgebra import GradedLieSuperalgebra, Parity, SuperDim
from .roots import DiagramId, ParabolicId, SuperAlgebraName

__all__ = ["GradedLieSuperalgebra", "Parity", "SuperDim", "DiagramId", "ParabolicId", "SuperAlgebraName"]
