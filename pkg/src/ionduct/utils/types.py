import os
from typing import Union

import numpy as np
import numpy.typing as npt

__all__ = ["PathLike", "Point", "FloatArray"]

PathLike = Union[str, os.PathLike]
Point = tuple[float, float]
FloatArray = npt.NDArray[np.float64]
