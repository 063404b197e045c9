"""Norms of multipliers.

Single-shell ("base") norms act on shell data ``xi -> m(2**j xi) psi(xi)``
sampled on a frequency lattice. For the smoothness norms that data is read as
an ordinary function of ``xi`` (see :meth:`Field.reinterpret`) and transformed
once more; the resulting variable is called ``zeta`` below.

Dyadic aggregates weight shell ``j`` by ``2**(j theta)`` and sum in l^2. Every
aggregate carries a geometric estimate of the part of the sum lying outside the
computed shell range.
"""

from __future__ import annotations

import csv
import itertools
import json
import math
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.special import zeta as _zeta

from . import kernels
from .dilation import TGrid
from .dyadic import WindowFamily, evaluate, shell_localize
from .errors import (
    AccuracyWarning,
    ContractViolation,
    DivergenceWarning,
    InvalidParameter,
    PreconditionError,
)
from .grid import Domain, Field, Grid, forward_transform, inverse_transform, lebesgue_norm
from .provenance import canonical, fingerprint

__all__ = [
    "SpaceTag",
    "Lp",
    "SobolevL2",
    "BesovDiag",
    "Hoelder",
    "LInf",
    "base_norm",
    "NormReport",
    "sigma_norm",
    "sigma_norms",
    "tail_estimate",
    "weighted_sobolev_norm",
    "equivalence_seminorm",
    "hnorm_sup",
    "unit_directions",
    "DEFAULT_SHELL_GRID",
]

# Nyquist 2 resolves the shell 1/2 < |xi| < 2; L = 128 puts zeta out to 128.
DEFAULT_SHELL_GRID = Grid(1, 1024, 128.0)

HOELDER_STRIDE = 4
HOELDER_RADIUS = 0.25
_COMPACT_TOL = 1e-10


@dataclass(frozen=True)
class SpaceTag:
    """The base space used on each shell."""

    kind: str
    p: Optional[float] = None
    s: Optional[float] = None
    gamma: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("Lp", "SobolevL2", "BesovDiag", "Hoelder", "LInf"):
            raise InvalidParameter(f"unknown space {self.kind!r}")
        if self.kind in ("Lp", "BesovDiag") and not (self.p is not None and self.p >= 1):
            raise InvalidParameter(f"{self.kind} needs p >= 1")
        if self.kind in ("SobolevL2", "BesovDiag") and not (self.s is not None and self.s >= 0):
            raise InvalidParameter(f"{self.kind} needs s >= 0")
        if self.kind == "Hoelder" and not (self.gamma is not None and 0 < self.gamma <= 1):
            raise InvalidParameter("Hoelder exponent must lie in (0, 1]")

    @property
    def label(self) -> str:
        args = [f"{k}={v:g}" for k, v in (("p", self.p), ("s", self.s), ("gamma", self.gamma)) if v is not None]
        return f"{self.kind}({', '.join(args)})"

    def as_dict(self) -> dict:
        d = {"kind": self.kind}
        for k in ("p", "s", "gamma"):
            v = getattr(self, k)
            if v is not None:
                d[k] = v if math.isfinite(v) else "inf"
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SpaceTag":
        kw = {k: (math.inf if d[k] == "inf" else float(d[k])) for k in ("p", "s", "gamma") if k in d}
        return cls(d["kind"], **kw)


def Lp(p: float) -> SpaceTag:
    return SpaceTag("Lp", p=float(p))


def SobolevL2(s: float) -> SpaceTag:
    return SpaceTag("SobolevL2", s=float(s))


def BesovDiag(p: float, s: float) -> SpaceTag:
    return SpaceTag("BesovDiag", p=float(p), s=float(s))


def Hoelder(gamma: float) -> SpaceTag:
    return SpaceTag("Hoelder", gamma=float(gamma))


def LInf() -> SpaceTag:
    return SpaceTag("LInf")


# ---------------------------------------------------------------------------
# single shell


def _boundary_max(a: np.ndarray) -> float:
    out = 0.0
    for ax in range(a.ndim):
        out = max(out, float(np.take(a, 0, axis=ax).max()), float(np.take(a, -1, axis=ax).max()))
    return out


def _pad3(arr: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(arr.reshape(arr.shape + (1,) * (3 - arr.ndim)))


def _lattice_offsets(d: int, reach: int, stride: int = 1, half: bool = False):
    """Integer vectors with entries in ``stride * [-reach/stride, reach/stride]``, norm <= reach, nonzero."""
    k = reach // stride
    axis = np.arange(-k, k + 1) * stride
    pts = np.array(list(itertools.product(axis, repeat=d)), dtype=np.int64).reshape(-1, d)
    norm = np.sqrt(np.sum(pts.astype(float) ** 2, axis=1))
    keep = (norm > 0) & (norm <= reach)
    if half:
        # first nonzero coordinate positive: one representative per +-pair
        nz = pts != 0
        first = np.argmax(nz, axis=1)
        keep &= pts[np.arange(len(pts)), first] > 0
    pts, norm = pts[keep], norm[keep]
    order = np.argsort(norm, kind="stable")
    pts = np.hstack([pts[order], np.zeros((len(order), 3 - d), dtype=np.int64)])
    return np.ascontiguousarray(pts), norm[order]


def _hoelder(gd: Field, gamma: float) -> float:
    vals = gd.values
    h = gd.grid.h
    reach = int(math.floor(HOELDER_RADIUS / h))
    sup = float(np.abs(vals).max())
    if reach < 1:
        raise PreconditionError("lattice too coarse for the Hoelder window")
    stride = max(1, min(HOELDER_STRIDE, reach // 2))
    offs, norm = _lattice_offsets(gd.grid.dim, reach, stride, half=True)
    denom = np.ascontiguousarray((norm * h) ** gamma)
    semi = kernels.hoelder_max(
        _pad3(vals.real.copy()), _pad3(vals.imag.copy()), offs, denom, int(stride)
    )
    return sup + semi


def _besov(gd: Field, p: float, s: float, w: WindowFamily) -> float:
    G = forward_transform(gd)
    zr = gd.grid.radius(Domain.FREQUENCY)
    head = lebesgue_norm(inverse_transform(G * w.phi(zr)), p)
    top = int(math.ceil(math.log2(max(zr.max(), 2.0)))) + 1
    blocks = np.array(
        [2.0 ** (j * s) * lebesgue_norm(inverse_transform(G * w.psi_j(j, zr)), p) for j in range(1, top + 1)]
    )
    if math.isinf(p):
        return head + float(blocks.max(initial=0.0))
    return head + float(np.sum(blocks**p) ** (1.0 / p))


def _sobolev(gd: Field, s: float) -> float:
    G = forward_transform(gd)
    zr = gd.grid.radius(Domain.FREQUENCY)
    a = np.abs(G.values)
    return float(np.sqrt(gd.grid.cell(Domain.FREQUENCY) * np.sum((1.0 + zr * zr) ** s * a * a)))


def base_norm(g: Field, space: SpaceTag, w: WindowFamily = WindowFamily()) -> float:
    """Norm of compactly supported frequency-side data ``g`` in ``space``.

    ``SobolevL2(s)`` weights the transform by ``(1 + |zeta|^2)^(s/2)``.
    ``BesovDiag(p, s)`` uses ``phi`` for the low block and ``psi_j``, ``j >= 1``,
    for the rest. ``Hoelder(gamma)`` is ``sup|g|`` plus the Hölder quotient over
    pairs within distance 1/4 on a stride-4 sublattice.
    """
    if g.domain is not Domain.FREQUENCY:
        raise ContractViolation("base_norm expects frequency-side shell data")
    a = np.abs(g.values)
    peak = float(a.max())
    if peak == 0.0:
        return 0.0
    if _boundary_max(a) > _COMPACT_TOL * peak:
        raise ContractViolation("shell data does not vanish at the edge of the lattice")
    gd = g.reinterpret()
    if space.kind == "Lp":
        return lebesgue_norm(gd, space.p)
    if space.kind == "LInf":
        return peak
    if space.kind == "SobolevL2":
        return _sobolev(gd, space.s)
    if space.kind == "BesovDiag":
        return _besov(gd, space.p, space.s, w)
    if space.kind == "Hoelder":
        return _hoelder(gd, space.gamma)
    raise InvalidParameter(f"unsupported space {space.kind}")  # pragma: no cover


# ---------------------------------------------------------------------------
# dyadic aggregate


def tail_estimate(weighted) -> tuple:
    """Geometric extrapolation of an l^2 sum beyond both ends of ``weighted``.

    The ratio on each side is read across the outermost five terms; the even
    span cancels the period-two wobble that chirped symbols leave in Besov
    blocks. Returns ``(tail, divergent)``; ``tail`` is ``inf`` when a side
    does not decay outward.
    """
    b = np.abs(np.asarray(weighted, dtype=float))
    total = 0.0
    for side in (b[::-1][:5][::-1], b[:5][::-1]):
        # side is ordered inward -> edge
        if side.size == 0 or side[-1] == 0.0:
            continue
        if side.size < 2 or np.any(side[:-1] == 0.0):
            return math.inf, True
        r = math.exp(float(np.mean(np.diff(np.log(side)))))
        if r >= 1.0:
            return math.inf, True
        total += side[-1] ** 2 * r * r / (1.0 - r * r)
    return math.sqrt(total), False


@dataclass
class NormReport:
    """Per-shell norms and their ``l^2_theta`` aggregate."""

    space: SpaceTag
    theta: float
    shells: dict
    total: float
    tail: float
    divergent: bool = False
    config_fingerprint: Optional[str] = None
    meta: dict = field(default_factory=dict)

    def weighted(self, j: int) -> float:
        return 2.0 ** (j * self.theta) * self.shells[j]

    def recompute_total(self) -> float:
        return math.sqrt(sum(self.weighted(j) ** 2 for j in self.shells))

    def slope(self, j_lo: int, j_hi: int) -> float:
        """Least-squares slope of ``log2`` shell norms over ``[j_lo, j_hi]``."""
        js = np.array([j for j in self.shells if j_lo <= j <= j_hi], dtype=float)
        v = np.array([self.shells[int(j)] for j in js])
        if js.size < 2 or np.any(v <= 0):
            raise PreconditionError("slope fit needs at least two positive shells")
        return float(np.polyfit(js, np.log2(v), 1)[0])

    def to_dict(self) -> dict:
        return {
            "space": self.space.as_dict(),
            "theta": self.theta,
            "total": self.total,
            "shells": {str(j): v for j, v in sorted(self.shells.items())},
            "tail": None if self.divergent else self.tail,
            "divergent": self.divergent,
            "config_fingerprint": self.config_fingerprint,
            "meta": canonical(self.meta),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NormReport":
        return cls(
            space=SpaceTag.from_dict(d["space"]),
            theta=float(d["theta"]),
            shells={int(j): float(v) for j, v in d["shells"].items()},
            total=float(d["total"]),
            tail=math.inf if d["tail"] is None else float(d["tail"]),
            divergent=bool(d.get("divergent", d["tail"] is None)),
            config_fingerprint=d.get("config_fingerprint"),
            meta=d.get("meta", {}),
        )

    def write_json(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2, sort_keys=True))

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh)
            wr.writerow(["j", "norm", "weighted"])
            for j in sorted(self.shells):
                wr.writerow([j, repr(self.shells[j]), repr(self.weighted(j))])


def _report_meta(m, w: WindowFamily, g: Grid) -> dict:
    return {
        "symbol": m.describe() if hasattr(m, "describe") else repr(m),
        "window": {"profile": w.profile, "j_min": w.j_min, "j_max": w.j_max},
        "grid": {"dim": g.dim, "N": g.N, "L": g.L},
    }


def sigma_norms(m, spaces, theta: float = 0.0, w: WindowFamily = WindowFamily(),
                g: Grid = DEFAULT_SHELL_GRID, fingerprint_of=None) -> list:
    """:func:`sigma_norm` for several base spaces, sharing the shell samples."""
    if g.nyquist < 2.0:
        raise PreconditionError(f"shell grid Nyquist {g.nyquist} < 2 does not resolve the shell")
    spaces = list(spaces)
    per = [dict() for _ in spaces]
    for j in w.shells:
        fj = shell_localize(m, w, j, g)
        for k, sp in enumerate(spaces):
            per[k][j] = base_norm(fj, sp, w)
    meta = _report_meta(m, w, g)
    out = []
    for sp, shells in zip(spaces, per):
        weighted = [2.0 ** (j * theta) * shells[j] for j in w.shells]
        tail, divergent = tail_estimate(weighted)
        if divergent:
            warnings.warn(
                f"{sp.label} shell norms of {meta['symbol']} do not decay at the edge of "
                f"[{w.j_min}, {w.j_max}]",
                DivergenceWarning,
                stacklevel=2,
            )
        fp_src = fingerprint_of if fingerprint_of is not None else dict(meta, space=sp.as_dict(), theta=theta)
        out.append(
            NormReport(
                space=sp,
                theta=float(theta),
                shells=shells,
                total=math.sqrt(sum(v * v for v in weighted)),
                tail=tail,
                divergent=divergent,
                config_fingerprint=fingerprint(fp_src),
                meta=meta,
            )
        )
    return out


def sigma_norm(m, space: SpaceTag, theta: float = 0.0, w: WindowFamily = WindowFamily(),
               g: Grid = DEFAULT_SHELL_GRID, fingerprint_of=None) -> NormReport:
    """Dyadic norm ``(sum_j 2^(2 j theta) ||m(2^j .) psi||^2)^(1/2)`` over the family's range."""
    return sigma_norms(m, [space], theta, w, g, fingerprint_of)[0]


# ---------------------------------------------------------------------------
# weighted integrals over the whole frequency space


def _sample(m, g: Grid) -> np.ndarray:
    return evaluate(m, g.points(Domain.FREQUENCY)).reshape(g.shape)


def _require_vanishing(vals, r, h, d, what):
    near = (r > 0) & (r < 1.5 * h * math.sqrt(d))
    peak = float(np.abs(vals).max())
    if np.any(near) and float(np.abs(vals[near]).max()) > 1e-8 * peak:
        raise PreconditionError(f"{what}: weight is not integrable against a symbol that is nonzero at 0")


def weighted_sobolev_norm(m, p: float, gamma: int, theta: float, g: Grid) -> float:
    """``sum_{l<=gamma} int |D^l m(x)|^p |x|^(p l + theta - d) dx`` (no outer root).

    ``m`` is sampled on the frequency lattice of ``g`` and must vanish at its
    edge; derivatives are spectral. ``|D^l m|`` is the Euclidean norm of the
    full order-``l`` derivative tensor.
    """
    p = float(p)
    gamma = int(gamma)
    if p < 1 or gamma < 0:
        raise InvalidParameter("need p >= 1 and gamma >= 0")
    d = g.dim
    vals = _sample(m, g)
    a = np.abs(vals)
    peak = float(a.max())
    if peak == 0.0:
        return 0.0
    if _boundary_max(a) > _COMPACT_TOL * peak:
        raise ContractViolation("symbol does not vanish at the edge of the lattice")
    r = g.radius(Domain.FREQUENCY)
    if theta <= 0:
        _require_vanishing(vals, r, g.dxi, d, "weighted_sobolev_norm")
    # the frequency lattice, read as a physical grid, for spectral derivatives
    dual = g.dual()
    G = forward_transform(Field(dual, Domain.PHYSICAL, vals))
    zeta = dual.mesh(Domain.FREQUENCY)
    mask = r > 0
    cell = g.cell(Domain.FREQUENCY)
    total = 0.0
    for l in range(gamma + 1):
        sq = np.zeros(g.shape)
        for axes in itertools.product(range(d), repeat=l):
            mult = np.ones(g.shape, dtype=complex)
            for ax in axes:
                mult = mult * (2j * math.pi * zeta[ax])
            D = inverse_transform(G * mult).values
            sq += np.abs(D) ** 2
        mag = np.sqrt(sq)
        total += cell * float(np.sum(mag[mask] ** p * r[mask] ** (p * l + theta - d)))
    return total


def _core_coefficient(alpha: float, h: float, d: int) -> float:
    """Missing lattice mass of ``|z.e|^2 |z|^(-d-2 alpha)`` near ``z = 0``.

    In one dimension the lattice sum over ``z != 0`` misses exactly
    ``-2 zeta(2 alpha - 1) h^(2 - 2 alpha)`` (Euler-Maclaurin); in higher
    dimensions the excluded cell is replaced by the ball of equal volume.
    """
    if d == 1:
        return float(-2.0 * _zeta(2.0 * alpha - 1.0) * h ** (2.0 - 2.0 * alpha))
    rho = h * math.gamma(d / 2 + 1) ** (1 / d) / math.sqrt(math.pi)
    sphere = 2.0 * math.pi ** (d / 2) / math.gamma(d / 2)
    return sphere * rho ** (2.0 - 2.0 * alpha) / (d * (2.0 - 2.0 * alpha))


def equivalence_seminorm(m, alpha: float, theta: float, g: Grid) -> float:
    """Double-integral seminorm plus ``int |m|^2 |x|^(2 theta - d)``, squared form.

    The inner integral runs over lattice points ``0 < |y - x| < |x|/2``; the
    unresolved core ``|y - x| < h`` is restored from the local gradient.
    Points ``y`` outside the lattice box count as zeros of ``m``.
    """
    alpha = float(alpha)
    if not 0 < alpha < 1:
        raise InvalidParameter("alpha must lie in (0, 1)")
    d = g.dim
    h = g.dxi
    vals = _sample(m, g)
    a = np.abs(vals)
    if a.max() == 0.0:
        return 0.0
    r = g.radius(Domain.FREQUENCY)
    if theta <= 0:
        _require_vanishing(vals, r, h, d, "equivalence_seminorm")
    support = r[a > 0]
    r_lo, r_hi = float(support.min()), float(support.max())
    if 2.0 * r_hi > g.nyquist:
        warnings.warn(
            "support reaches beyond half the lattice box; neighbours outside are taken as zero",
            AccuracyWarning,
            stacklevel=2,
        )
    active = (r > 2.0 * r_lo / 3.0) & (r < 2.0 * r_hi) & (r > 0)
    xw = np.where(active, np.where(r > 0, r, 1.0) ** (2 * alpha + 2 * theta - d), 0.0)
    reach = int(math.ceil(r[active].max() / 2.0 / h))
    offs, norm = _lattice_offsets(d, reach)
    olen = norm * h
    kern = np.ascontiguousarray(olen ** (-d - 2.0 * alpha))
    cell = h**d
    double = cell * cell * kernels.frac_double_sum(
        _pad3(vals.real.copy()), _pad3(vals.imag.copy()), _pad3(xw), _pad3(r.astype(float)),
        offs, np.ascontiguousarray(olen), kern,
    )
    grads = np.gradient(vals, h) if d > 1 else [np.gradient(vals, h)]
    grad2 = sum(np.abs(gr) ** 2 for gr in grads)
    core = cell * _core_coefficient(alpha, h, d) * float(np.sum(xw * grad2))
    if core > 0.5 * max(double, 1e-300):
        warnings.warn("core correction dominates the lattice double sum; refine the grid",
                      AccuracyWarning, stacklevel=2)
    pos = r > 0
    plain = cell * float(np.sum(a[pos] ** 2 * r[pos] ** (2 * theta - d)))
    return double + core + plain


# ---------------------------------------------------------------------------
# direction-wise L^2(dt/t)


def unit_directions(d: int, count: int = 16) -> np.ndarray:
    """``count`` unit vectors: both signs in d=1, equal angles in d=2, a Fibonacci sphere in d=3."""
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        th = 2 * math.pi * np.arange(count) / count
        return np.stack([np.cos(th), np.sin(th)], axis=-1)
    if d == 3:
        k = np.arange(count) + 0.5
        z = 1 - 2 * k / count
        rho = np.sqrt(1 - z * z)
        ph = math.pi * (1 + math.sqrt(5)) * k
        return np.stack([rho * np.cos(ph), rho * np.sin(ph), z], axis=-1)
    raise InvalidParameter("dimension must be 1, 2 or 3")


def hnorm_sup(m, directions, tgrid: TGrid = TGrid(), tail_tol: float = 1e-10) -> float:
    """``max_u (sum_k w_k |m(t_k u)|^2)^(1/2)`` over unit vectors ``u``."""
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    t, wt = tgrid.nodes, tgrid.weights
    pts = t[None, :, None] * dirs[:, None, :]
    vals = evaluate(m, pts.reshape(-1, dirs.shape[1])).reshape(len(dirs), t.size)
    sq = np.abs(vals) ** 2
    peak = float(sq.max())
    if peak > 0:
        ends = float(max(sq[:, 0].max(), sq[:, -1].max()))
        if ends > tail_tol * peak:
            warnings.warn(
                f"|m(t u)|^2 at the ends of the dilation grid is {ends / peak:.2e} of its peak",
                AccuracyWarning,
                stacklevel=2,
            )
    return float(np.sqrt(np.max(sq @ wt)))
