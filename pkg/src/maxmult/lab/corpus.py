"""Seeded test functions: random band-limited fields and wave packets.

Bands are absolute frequency intervals, so the same function is produced on a
refined grid with the same box (the extra lattice frequencies get zero mass).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameter
from ..grid import Domain, Field, Grid, inverse_transform, lebesgue_norm

__all__ = ["CorpusSpec", "band_limited", "corpus", "wave_packet"]


@dataclass(frozen=True)
class CorpusSpec:
    """``count`` real fields with ``|xi|`` in ``band`` (fractions of the base grid's Nyquist)."""

    seed: int = 12345
    count: int = 10
    band: tuple = (0.125, 0.5)

    def absolute_band(self, base: Grid) -> tuple:
        return (self.band[0] * base.nyquist, self.band[1] * base.nyquist)


def _band_indices(grid: Grid, lo: float, hi: float) -> np.ndarray:
    """Signed integer frequency indices (``xi = k * dxi``) with ``lo <= |xi| <= hi``, canonical order."""
    kmax = int(np.floor(hi / grid.dxi))
    axis = np.arange(-kmax, kmax + 1)
    ks = np.stack(np.meshgrid(*([axis] * grid.dim), indexing="ij"), axis=-1).reshape(-1, grid.dim)
    r = np.sqrt(np.sum((ks * grid.dxi) ** 2, axis=1))
    return ks[(r >= lo) & (r <= hi)]


def band_limited(grid: Grid, lo: float, hi: float, rng: np.random.Generator) -> Field:
    """Real field with Gaussian random coefficients on the lattice frequencies in the band, unit L^2."""
    if hi >= grid.nyquist:
        raise InvalidParameter("band must stay below the Nyquist frequency")
    ks = _band_indices(grid, lo, hi)
    coef = rng.standard_normal(len(ks)) + 1j * rng.standard_normal(len(ks))
    spec = np.zeros(grid.shape, dtype=complex)
    idx = tuple((ks + grid.N // 2).T)
    spec[idx] = coef
    # Hermitian symmetrisation makes the field real
    flip = tuple((-ks + grid.N // 2).T)
    sym = np.zeros_like(spec)
    sym[flip] = np.conj(coef)
    spec = 0.5 * (spec + sym)
    f = inverse_transform(Field(grid, Domain.FREQUENCY, spec))
    vals = f.values.real
    return Field(grid, Domain.PHYSICAL, vals / lebesgue_norm(Field(grid, Domain.PHYSICAL, vals), 2))


def corpus(grid: Grid, spec: CorpusSpec = CorpusSpec(), base: Grid | None = None) -> list:
    """The seeded corpus on ``grid``; ``base`` fixes the absolute band (defaults to ``grid``)."""
    lo, hi = spec.absolute_band(base or grid)
    rng = np.random.default_rng(spec.seed)
    return [band_limited(grid, lo, hi, rng) for _ in range(spec.count)]


def wave_packet(grid: Grid, xi0: float, width: float) -> Field:
    """``exp(-pi (|x| / width)^2) cos(2 pi xi0 x_1)``, unit L^2."""
    x = grid.mesh(Domain.PHYSICAL)
    r2 = sum(c * c for c in x)
    vals = np.exp(-np.pi * r2 / width**2) * np.cos(2 * np.pi * xi0 * x[0])
    f = Field(grid, Domain.PHYSICAL, vals)
    return f * (1.0 / lebesgue_norm(f, 2))
