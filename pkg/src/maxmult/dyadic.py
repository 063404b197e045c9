"""Smooth Littlewood-Paley windows, dyadic shells and the retract maps S and R.

The bump ``phi(xi) = chi(|xi|)`` equals one on the unit ball and vanishes
outside the ball of radius two; the shell window is
``psi(xi) = phi(xi) - phi(2 xi)`` and ``psi_j(xi) = psi(xi / 2**j)``.
Sums of consecutive windows telescope, which is what makes them a partition
of unity on annuli.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolation, InvalidParameter, SymbolEvaluationError
from .grid import Domain, Field, Grid

__all__ = [
    "PROFILE_VERSION",
    "transition",
    "WindowFamily",
    "ShellSequence",
    "evaluate",
    "eval_window",
    "partition_sum",
    "shell_localize",
    "retract_S",
    "retract_R",
]

PROFILE_VERSION = "mollifier-v1"


def transition(r):
    """Smooth step: 1 for ``r <= 1``, 0 for ``r >= 2``, C-infinity in between.

    Built from ``g(x) = exp(-1/x)`` as ``g(2-r) / (g(2-r) + g(r-1))``.
    The ratio is rewritten as a logistic function of
    ``1/(r-1) - 1/(2-r)`` so it never forms 0/0.
    """
    r = np.asarray(r, dtype=float)
    out = np.where(r <= 1.0, 1.0, 0.0)
    mid = (r > 1.0) & (r < 2.0)
    if np.any(mid):
        rm = r[mid]
        z = 1.0 / (rm - 1.0) - 1.0 / (2.0 - rm)
        with np.errstate(over="ignore"):
            out[mid] = 1.0 / (1.0 + np.exp(-z))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class WindowFamily:
    """Radial bump ``phi`` with dyadic windows ``psi_j`` over ``[j_min, j_max]``."""

    j_min: int = -20
    j_max: int = 20
    profile: str = PROFILE_VERSION

    def __post_init__(self):
        if self.profile != PROFILE_VERSION:
            raise InvalidParameter(f"unknown window profile {self.profile!r}")
        if int(self.j_min) > int(self.j_max):
            raise InvalidParameter("empty shell range")
        object.__setattr__(self, "j_min", int(self.j_min))
        object.__setattr__(self, "j_max", int(self.j_max))

    @property
    def shells(self) -> range:
        return range(self.j_min, self.j_max + 1)

    def phi(self, r):
        return transition(r)

    def psi(self, r):
        """Radial profile of the window, ``chi(r) - chi(2r)``."""
        r = np.asarray(r, dtype=float)
        return transition(r) - transition(2.0 * r)

    def psi_j(self, j: int, r):
        return self.psi(np.asarray(r, dtype=float) * 2.0 ** (-j))

    def with_range(self, j_min: int, j_max: int) -> "WindowFamily":
        return WindowFamily(j_min, j_max, self.profile)


def _norm(xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    if xi.ndim == 0:
        return np.abs(xi)
    return np.sqrt(np.sum(xi * xi, axis=-1))


def eval_window(w: WindowFamily, j: int, xi):
    """``psi_j(xi)``; ``xi`` is a point or an array of points (last axis = coordinates)."""
    return w.psi_j(j, _norm(xi))


def partition_sum(w: WindowFamily, xi, a: int, b: int):
    """Direct sum of the windows ``psi_a + ... + psi_b`` at ``xi``."""
    if a > b:
        raise InvalidParameter("partition_sum needs a <= b")
    r = _norm(xi)
    total = np.zeros_like(np.asarray(r, dtype=float))
    for j in range(a, b + 1):
        total = total + w.psi_j(j, r)
    return total if np.ndim(total) else float(total)


def evaluate(m, points: np.ndarray) -> np.ndarray:
    """Evaluate a symbol on ``(n, dim)`` points, converting failures into errors with ξ."""
    points = np.asarray(points, dtype=float)
    if points.shape[0] == 0:
        return np.zeros(0, dtype=complex)
    try:
        vals = np.asarray(m(points), dtype=complex).reshape(points.shape[0])
    except SymbolEvaluationError:
        raise
    except Exception as exc:
        raise SymbolEvaluationError(f"symbol raised {exc!r}", _first_failure(m, points)) from exc
    bad = ~np.isfinite(vals)
    if np.any(bad):
        first = points[np.argmax(bad)]
        raise SymbolEvaluationError("non-finite symbol value", tuple(first))
    return vals


def _first_failure(m, points) -> tuple:
    for p in points:
        try:
            v = complex(np.asarray(m(p[None, :])).ravel()[0])
        except Exception:
            return tuple(p)
        if not np.isfinite(v):
            return tuple(p)
    return tuple(points[0])


def shell_localize(m, w: WindowFamily, j: int, g: Grid) -> Field:
    """Samples of ``xi -> m(2**j xi) psi(xi)`` on the frequency lattice of ``g``.

    ``m`` is evaluated only where the window is nonzero.
    """
    r = g.radius(Domain.FREQUENCY).ravel()
    win = w.psi(r)
    mask = win > 0.0
    vals = np.zeros(r.size, dtype=complex)
    if np.any(mask):
        pts = g.points(Domain.FREQUENCY)[mask] * 2.0**j
        vals[mask] = evaluate(m, pts) * win[mask]
    return Field(g, Domain.FREQUENCY, vals)


@dataclass(frozen=True)
class ShellSequence:
    """Shell fields indexed by ``j_min, ..., j_max``."""

    j_min: int
    fields: tuple

    @property
    def j_max(self) -> int:
        return self.j_min + len(self.fields) - 1

    @property
    def indices(self) -> range:
        return range(self.j_min, self.j_max + 1)

    def __getitem__(self, j: int) -> Field:
        if not self.j_min <= j <= self.j_max:
            raise IndexError(j)
        return self.fields[j - self.j_min]

    def __iter__(self):
        return iter(zip(self.indices, self.fields))

    def __len__(self):
        return len(self.fields)


def retract_S(m, w: WindowFamily, g: Grid) -> ShellSequence:
    """The sequence of shell samples ``{m(2**j .) psi}`` over the family's range."""
    return ShellSequence(w.j_min, tuple(shell_localize(m, w, j, g) for j in w.shells))


def _upsample(values: np.ndarray, factor: int) -> np.ndarray:
    """Trigonometric interpolation of lattice data onto a lattice ``factor`` times finer."""
    n = values.shape[0]
    d = values.ndim
    coef = np.fft.fftn(np.fft.ifftshift(values))
    big = np.zeros((factor * n,) * d, dtype=complex)
    half = n // 2
    idx = [np.r_[0:half, factor * n - half: factor * n]] * d
    big[np.ix_(*idx)] = coef
    out = np.fft.ifftn(big) * factor**d
    return np.fft.fftshift(out)


_MAX_UPSAMPLED = 2**25


def retract_R(seq: ShellSequence, w: WindowFamily, g: Grid) -> Field:
    """Reassemble ``sum_j (psi_{j-1} + psi_j + psi_{j+1})(xi) f_j(xi / 2**j)``.

    Shell data are read off the lattice directly when ``2**-j xi`` is a lattice
    point (``j <= 0``) and by exact trigonometric interpolation otherwise.
    """
    if seq.j_min != w.j_min or seq.j_max != w.j_max:
        raise ContractViolation(
            f"sequence covers [{seq.j_min}, {seq.j_max}], family expects [{w.j_min}, {w.j_max}]"
        )
    n, d = g.N, g.dim
    r = g.radius(Domain.FREQUENCY)
    centred = np.indices(g.shape) - n // 2
    out = np.zeros(g.shape, dtype=complex)
    for j, fj in seq:
        if fj.grid != g or fj.domain is not Domain.FREQUENCY:
            raise ContractViolation(f"shell {j} is not a frequency field on the target grid")
        if not np.any(fj.values):
            continue
        weight = w.psi_j(j - 1, r) + w.psi_j(j, r) + w.psi_j(j + 1, r)
        # f_j vanishes outside 1/2 < |.| < 2, so only |xi| < 2**(j+1) matters
        target = (weight > 0) & (r < 2.0 ** (j + 1))
        if not np.any(target):
            continue
        if j <= 0:
            step = 2 ** (-j)
            src = centred * step + n // 2
            ok = target & np.all((src >= 0) & (src < n), axis=0)
            vals = np.zeros(g.shape, dtype=complex)
            vals[ok] = fj.values[tuple(s[ok] for s in src)]
        else:
            factor = 2**j
            if (factor * n) ** d > _MAX_UPSAMPLED:
                raise ContractViolation(
                    f"shell {j} needs a {factor}x finer lattice; grid too large for exact interpolation"
                )
            fine = _upsample(fj.values, factor)
            src = centred + factor * n // 2
            vals = np.zeros(g.shape, dtype=complex)
            vals[target] = fine[tuple(s[target] for s in src)]
        out += weight * vals
    return Field(g, Domain.FREQUENCY, out)
