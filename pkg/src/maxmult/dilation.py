"""Geometric dilation grids standing in for ``sup_{t>0}`` and ``int_0^inf dt/t``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameter

__all__ = ["TGrid"]


@dataclass(frozen=True)
class TGrid:
    """Nodes ``t_k = t_min * ratio**k`` up to ``t_max`` with weights ``log(ratio)``.

    The weights make ``sum_k w_k g(t_k)`` the rectangle rule for ``int g(t) dt/t``
    in the variable ``log t``.
    """

    t_min: float = 2.0**-10
    t_max: float = 2.0**10
    ratio: float = 2.0 ** (1 / 16)

    def __post_init__(self):
        if not self.t_min > 0 or not self.t_max > self.t_min:
            raise InvalidParameter("need 0 < t_min < t_max")
        if not self.ratio > 1:
            raise InvalidParameter("ratio must exceed 1")

    @property
    def count(self) -> int:
        # tolerate rounding in log(t_max / t_min) / log(ratio)
        return int(math.floor(math.log(self.t_max / self.t_min) / math.log(self.ratio) + 1e-9)) + 1

    @property
    def nodes(self) -> np.ndarray:
        return self.t_min * self.ratio ** np.arange(self.count)

    @property
    def weights(self) -> np.ndarray:
        return np.full(self.count, math.log(self.ratio))

    def refined(self) -> "TGrid":
        """Twice the node density over the same span."""
        return TGrid(self.t_min, self.t_max, math.sqrt(self.ratio))

    def as_dict(self) -> dict:
        return {"t_min": self.t_min, "t_max": self.t_max, "ratio": self.ratio}
