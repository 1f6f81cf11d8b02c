from typing import Union
import numpy as np

Identifier = Union[int, str]
ArrayLike = Union[np.ndarray, float, int, np.integer, np.floating]
