"""Multiplier operators on lattice fields.

``T_{m(t.)} f`` is computed as the inverse transform of ``m(t xi) f^(xi)``.
The maximal operator and the square function scan a geometric dilation grid
(:class:`~maxmult.dilation.TGrid`) and reduce pointwise.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import beta as _beta

from .dilation import TGrid
from .dyadic import evaluate
from .errors import (
    AccuracyWarning,
    AliasingWarning,
    BoundaryAchieverWarning,
    ContractViolation,
    InvalidParameter,
    PreconditionError,
)
from .fraccalc import DEFAULT_EPS, GradedMesh, _check_eps, mtilde_symbol, tabulated_mtilde
from .grid import Domain, Field, forward_transform, inverse_transform, lebesgue_norm
from .symbols import Symbol, make_halfwave_difference

__all__ = [
    "TGrid",
    "apply_multiplier",
    "maximal_operator",
    "MaximalResult",
    "square_function",
    "domination_constants",
    "domination_check",
    "DominationReport",
    "mtilde_for",
    "halfwave_difference",
    "aliasing_fraction",
]

ALIAS_BAND = 0.8
ALIAS_TOL = 1e-6
SUPPORT_TOL = 1e-15


def aliasing_fraction(F: Field, band: float = ALIAS_BAND) -> float:
    """L^2 share of ``F`` outside ``band * Nyquist`` in any coordinate."""
    a2 = np.abs(F.values) ** 2
    tot = float(a2.sum())
    if tot == 0.0:
        return 0.0
    outside = np.zeros(F.grid.shape, dtype=bool)
    for c in F.grid.mesh(Domain.FREQUENCY):
        outside |= np.abs(c) > band * F.grid.nyquist
    return math.sqrt(float(a2[outside].sum()) / tot)


class _Spectrum:
    """``f^`` and the lattice points it lives on, prepared once per field."""

    def __init__(self, f: Field):
        if f.domain is not Domain.PHYSICAL:
            raise ContractViolation("operators act on physical-domain fields")
        self.grid = f.grid
        self.F = forward_transform(f)
        a = np.abs(self.F.values).ravel()
        peak = a.max() if a.size else 0.0
        # f^ is evaluated against m only where it carries mass
        self.mask = a > SUPPORT_TOL * peak if peak > 0 else np.zeros(a.size, dtype=bool)
        self.pts = self.grid.points(Domain.FREQUENCY)[self.mask]
        self.coef = self.F.values.ravel()[self.mask]
        frac = aliasing_fraction(self.F)
        if frac > ALIAS_TOL:
            warnings.warn(
                f"{frac:.2e} of the L2 mass of f^ lies beyond {ALIAS_BAND:.0%} of Nyquist",
                AliasingWarning,
                stacklevel=3,
            )

    def apply(self, m, t: float) -> np.ndarray:
        spec = np.zeros(self.grid.N**self.grid.dim, dtype=complex)
        if self.pts.shape[0]:
            spec[self.mask] = evaluate(m, t * self.pts) * self.coef
        F = Field(self.grid, Domain.FREQUENCY, spec)
        return inverse_transform(F).values


def apply_multiplier(m, f: Field, t: float = 1.0) -> Field:
    """``T_{m(t.)} f``; emits :class:`AliasingWarning` when ``f^`` reaches close to Nyquist."""
    t = float(t)
    if not t > 0:
        raise InvalidParameter("dilation t must be positive")
    sp = _Spectrum(f)
    return Field(f.grid, Domain.PHYSICAL, sp.apply(m, t))


@dataclass
class MaximalResult:
    """``sup_k |T_{m(t_k .)} f|`` and the index ``k`` attaining it at every point."""

    field: Field
    achiever: np.ndarray
    tgrid: TGrid

    @property
    def values(self) -> np.ndarray:
        return self.field.values.real

    def boundary_share(self, rel: float = 1e-8) -> float:
        """Share of points (where the maximum is not negligible) attained at an end node."""
        v = self.values
        live = v > rel * v.max() if v.max() > 0 else np.zeros(v.shape, dtype=bool)
        if not np.any(live):
            return 0.0
        k = self.achiever[live]
        return float(np.mean((k == 0) | (k == self.tgrid.count - 1)))


def maximal_operator(m, f: Field, tg: TGrid = TGrid(), boundary_tol: float = 0.05) -> MaximalResult:
    """Pointwise maximum over the dilation grid, with achiever indices."""
    sp = _Spectrum(f)
    best = np.full(f.grid.shape, -1.0)
    arg = np.zeros(f.grid.shape, dtype=np.int64)
    for k, t in enumerate(tg.nodes):
        v = np.abs(sp.apply(m, t))
        better = v > best
        best[better] = v[better]
        arg[better] = k
    out = MaximalResult(Field(f.grid, Domain.PHYSICAL, best), arg, tg)
    share = out.boundary_share()
    if share > boundary_tol:
        warnings.warn(
            f"{share:.1%} of points attain the maximum at an end of the dilation grid",
            BoundaryAchieverWarning,
            stacklevel=2,
        )
    return out


def _square_scan(m, f: Field, tg: TGrid):
    sp = _Spectrum(f)
    acc = np.zeros(f.grid.shape)
    norms = np.zeros(tg.count)
    cell = f.grid.cell(Domain.PHYSICAL)
    for k, (t, w) in enumerate(zip(tg.nodes, tg.weights)):
        v = np.abs(sp.apply(m, t)) ** 2
        norms[k] = math.sqrt(cell * v.sum())
        acc += w * v
    peak = norms.max()
    edge = float(max(norms[0], norms[-1]) / peak) if peak > 0 else 0.0
    return np.sqrt(acc), edge


def square_function(m, f: Field, tg: TGrid = TGrid(), tail_tol: float = 1e-8) -> Field:
    """``(sum_k w_k |T_{m(t_k .)} f|^2)^(1/2)``, the rectangle rule for ``dt/t``."""
    vals, edge = _square_scan(m, f, tg)
    if edge > tail_tol:
        warnings.warn(
            f"||T f||_2 at the dilation-grid ends is {edge:.2e} of its peak",
            AccuracyWarning,
            stacklevel=2,
        )
    return Field(f.grid, Domain.PHYSICAL, vals)


# ---------------------------------------------------------------------------
# square-function domination


def domination_constants(eps: float) -> dict:
    """The two candidate constants in ``|M_m f|^2 <= C G_{m~} f^2``.

    ``spec``: ``B(2 eps, 1 - 2 eps) / Gamma(1/2 - eps)^2``.
    ``sharp``: the same divided by ``Gamma(1/2 + eps)^2``, which is what the
    Cauchy-Schwarz step gives once the Riemann-Liouville normalisation
    ``1/Gamma(1/2 + eps)`` is kept.
    """
    eps = _check_eps(eps)
    spec = float(_beta(2 * eps, 1 - 2 * eps)) / math.gamma(0.5 - eps) ** 2
    return {"spec": spec, "sharp": spec / math.gamma(0.5 + eps) ** 2}


def mtilde_for(m: Symbol, eps: float, fields, tg: TGrid, mesh: GradedMesh = GradedMesh()) -> Symbol:
    """``m~`` ready for evaluation at every ``t_k xi`` a scan over ``fields`` will touch.

    Radial symbols get a log-r table covering the spectral support of the
    fields; others fall back to direct quadrature.
    """
    if m.profile is None:
        return mtilde_symbol(m, eps, mesh)
    fields = [fields] if isinstance(fields, Field) else list(fields)
    lo, hi = math.inf, 0.0
    for f in fields:
        sp = _Spectrum(f)
        r = np.sqrt(np.sum(sp.pts**2, axis=1))
        r = r[r > 0]
        if r.size:
            lo, hi = min(lo, r.min()), max(hi, r.max())
    if hi == 0.0:
        return m
    return tabulated_mtilde(m, eps, 0.999 * tg.t_min * lo, 1.001 * tg.nodes[-1] * hi, mesh)


@dataclass
class DominationReport:
    eps: float
    constants: dict
    max_ratio: dict
    passed: bool
    tolerance: float
    points: int
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "eps": self.eps,
            "constants": self.constants,
            "max_ratio": self.max_ratio,
            "passed": self.passed,
            "tolerance": self.tolerance,
            "points": self.points,
            "meta": self.meta,
        }


def domination_check(m: Symbol, f: Field, eps: float = DEFAULT_EPS, tg: TGrid = TGrid(),
                     mtilde: Symbol | None = None, tolerance: float = 1.05,
                     rel_floor: float = 1e-8) -> DominationReport:
    """Pointwise ratio ``M_m f^2 / (C G_{m~} f^2)`` for both constants.

    The verdict uses the ``spec`` constant; ``max_ratio`` reports both.
    """
    eps = _check_eps(eps)
    if not m.vanishes_near_origin:
        raise PreconditionError("domination needs a symbol vanishing near the origin")
    consts = domination_constants(eps)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundaryAchieverWarning)
        M = maximal_operator(m, f, tg).values
    if not np.any(np.abs(f.values)):
        return DominationReport(eps, consts, {"spec": 0.0, "sharp": 0.0}, True, tolerance, 0,
                                {"vacuous": True})
    mt = mtilde if mtilde is not None else mtilde_for(m, eps, f, tg)
    # m~ decays like 1/|xi| when m has compact support, so the t-range edge
    # is recorded (the truncation can only shrink G, i.e. raise the ratio)
    G, edge = _square_scan(mt, f, tg)
    live = G > rel_floor * G.max()
    q = (M[live] / G[live]) ** 2
    ratios = {k: float(q.max() / c) for k, c in consts.items()}
    return DominationReport(
        eps, consts, ratios, ratios["spec"] <= tolerance, tolerance, int(live.sum()),
        {"M_norm": lebesgue_norm(Field(f.grid, Domain.PHYSICAL, M), 2),
         "G_norm": lebesgue_norm(Field(f.grid, Domain.PHYSICAL, G), 2),
         "G_edge_ratio": edge},
    )


def halfwave_difference(f: Field, alpha: float, beta: float, t: float) -> Field:
    """``U_{alpha,beta} f(., t)``: the multiplier ``(e^{i t |xi|^alpha} - 1) / t^beta`` applied to ``f``."""
    return apply_multiplier(make_halfwave_difference(alpha, beta, t), f, 1.0)
