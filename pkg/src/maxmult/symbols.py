"""Fourier multiplier symbols with behavioural metadata, and the concrete families.

A :class:`Symbol` evaluates on arrays of frequency points whose last axis holds
coordinates. Radial symbols additionally carry their profile ``h`` with
``m(xi) = h(|xi|)``, which lets callers work with radii directly.

Metadata used elsewhere:

``inner_radius``
    the symbol is exactly zero on the closed ball of this radius.
``phase_rate``
    optional ``r -> |d(phase)/d(log r)|``; quadratures use it to resolve
    oscillation along rays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional

import numpy as np

from .dyadic import WindowFamily, transition
from .errors import ContractViolation, InvalidParameter, PreconditionError

__all__ = [
    "Symbol",
    "make_radial",
    "make_constant",
    "make_window",
    "make_bump",
    "make_annulus",
    "make_slow_decay",
    "make_halfwave_difference",
    "make_limited_decay",
    "make_surface_measure",
    "split_at_origin",
    "bessel_j0",
    "validate",
    "FAMILIES",
    "from_spec",
]


def _radius(xi: np.ndarray) -> np.ndarray:
    return np.sqrt(np.sum(xi * xi, axis=-1))


@dataclass(frozen=True, eq=False)
class Symbol:
    """An evaluable multiplier ``m: R^d -> C`` plus metadata."""

    fn: Callable[[np.ndarray], np.ndarray]
    name: str = "symbol"
    params: tuple = ()
    radial: bool = False
    profile: Optional[Callable[[np.ndarray], np.ndarray]] = None
    inner_radius: Optional[float] = None
    smooth_at_origin: bool = True
    homogeneity: Optional[float] = None
    decay: Optional[float] = None
    phase_rate: Optional[Callable[[np.ndarray], np.ndarray]] = None
    targets: tuple = field(default=())

    @property
    def vanishes_near_origin(self) -> bool:
        return self.inner_radius is not None and self.inner_radius > 0

    def __call__(self, xi) -> np.ndarray:
        xi = np.asarray(xi, dtype=float)
        if xi.ndim == 0:
            xi = xi.reshape(1)
        lead = xi.shape[:-1]
        if self.profile is not None:
            out = self.profile(_radius(xi))
        else:
            out = self.fn(xi.reshape(-1, xi.shape[-1]))
        return np.asarray(out, dtype=complex).reshape(lead)

    def at_radius(self, r) -> np.ndarray:
        """Profile values for a radial symbol."""
        if self.profile is None:
            raise ContractViolation(f"{self.name} is not radial")
        return np.asarray(self.profile(np.asarray(r, dtype=float)), dtype=complex)

    def describe(self) -> dict:
        return {"family": self.name, "params": dict(self.params)}

    def rate(self, r) -> np.ndarray:
        """Phase change per unit ``log r`` (zero when no hint is attached)."""
        r = np.asarray(r, dtype=float)
        if self.phase_rate is None:
            return np.zeros_like(r)
        return np.abs(np.asarray(self.phase_rate(r), dtype=float))

    # -- algebra --------------------------------------------------------
    def dilate(self, t: float) -> "Symbol":
        """The symbol ``xi -> m(t xi)``."""
        t = float(t)
        if not t > 0:
            raise InvalidParameter("dilation factor must be positive")
        fn, prof, rate = self.fn, self.profile, self.phase_rate
        return replace(
            self,
            fn=lambda x: fn(t * x),
            profile=None if prof is None else (lambda r: prof(t * r)),
            inner_radius=None if self.inner_radius is None else self.inner_radius / t,
            phase_rate=None if rate is None else (lambda r: rate(t * r)),
            params=self.params + (("dilation", t),),
        )

    def _combine(self, other, op, name, inner):
        if isinstance(other, Symbol):
            f1, f2 = self.fn, other.fn
            p1, p2 = self.profile, other.profile
            radial = self.radial and other.radial and p1 is not None and p2 is not None
            rates = [s.phase_rate for s in (self, other) if s.phase_rate is not None]
            return Symbol(
                fn=lambda x: op(np.asarray(f1(x)), np.asarray(f2(x))),
                name=name,
                params=(("left", self.name), ("right", other.name)),
                radial=radial,
                profile=(lambda r: op(np.asarray(p1(r)), np.asarray(p2(r)))) if radial else None,
                inner_radius=inner(self.inner_radius, other.inner_radius),
                smooth_at_origin=self.smooth_at_origin and other.smooth_at_origin,
                phase_rate=_max_rate(rates),
            )
        c = complex(other)
        f1, p1 = self.fn, self.profile
        return replace(
            self,
            fn=lambda x: op(np.asarray(f1(x)), c),
            profile=None if p1 is None else (lambda r: op(np.asarray(p1(r)), c)),
            name=name,
        )

    def __add__(self, other):
        if not isinstance(other, Symbol):
            raise TypeError("symbols only add to symbols")
        return self._combine(other, np.add, f"({self.name}+{other.name})", _inner_min)

    def __sub__(self, other):
        if not isinstance(other, Symbol):
            raise TypeError("symbols only subtract symbols")
        return self._combine(other, np.subtract, f"({self.name}-{other.name})", _inner_min)

    def __mul__(self, other):
        oname = other.name if isinstance(other, Symbol) else repr(other)
        return self._combine(other, np.multiply, f"{self.name}*{oname}", _inner_max)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0


def _inner_min(a, b):
    if a is None or b is None:
        return None
    return min(a, b)


def _inner_max(a, b):
    vals = [v for v in (a, b) if v is not None]
    return max(vals) if vals else None


def _max_rate(rates):
    if not rates:
        return None
    if len(rates) == 1:
        return rates[0]
    return lambda r: np.maximum.reduce([np.abs(np.asarray(q(r), dtype=float)) for q in rates])


# ---------------------------------------------------------------------------
# constructors


def make_radial(h, name: str = "radial", params: tuple = (), **meta) -> Symbol:
    """Radial symbol ``m(xi) = h(|xi|)``."""
    return Symbol(
        fn=lambda x: h(_radius(x)), name=name, params=tuple(params), radial=True, profile=h, **meta
    )


def make_constant(c: complex = 1.0) -> Symbol:
    c = complex(c)
    return make_radial(
        lambda r: np.full(np.shape(r), c, dtype=complex),
        name="constant",
        params=(("c", c),),
        homogeneity=0.0,
        inner_radius=0.0 if c == 0 else None,
    )


def make_window(w: WindowFamily = WindowFamily()) -> Symbol:
    """The shell window ``psi`` as a symbol; zero for ``|xi| <= 1/2``."""
    return make_radial(w.psi, name="window", inner_radius=0.5)


def make_bump(w: WindowFamily = WindowFamily()) -> Symbol:
    """The bump ``phi``: one on the unit ball, zero outside radius two."""
    return make_radial(w.phi, name="bump")


def _cut_above(r, c):
    """Smooth cutoff: 0 for ``r <= c``, 1 for ``r >= 2c``."""
    return 1.0 - transition(np.asarray(r, dtype=float) / c)


def make_annulus(
    r_in: float = 0.5,
    r_out: float = 4.0,
    power: float = 0.0,
    omega: float = 0.0,
    amplitude: float = 1.0,
) -> Symbol:
    """Smooth annulus bump ``A r^power e^{i omega r}`` supported in ``[r_in, r_out]``.

    The bump is identically ``A r^power e^{i omega r}`` on ``[2 r_in, r_out/2]``
    whenever ``4 r_in <= r_out``.
    """
    if not (0 < r_in < r_out):
        raise InvalidParameter("need 0 < r_in < r_out")
    amp = float(amplitude)

    def h(r):
        r = np.asarray(r, dtype=float)
        out = np.zeros(r.shape, dtype=complex)
        mask = (r > r_in) & (r < r_out)
        rm = r[mask]
        out[mask] = amp * _cut_above(rm, r_in) * transition(2.0 * rm / r_out) * rm**power * np.exp(
            1j * omega * rm
        )
        return out

    # phase only accrues on the support; capping keeps dilation integrals that
    # reach across the whole annulus bounded
    rate = (lambda r: omega * np.minimum(np.asarray(r, dtype=float), r_out)) if omega else None
    sym = make_radial(
        h,
        name="annulus",
        params=(("r_in", r_in), ("r_out", r_out), ("power", power), ("omega", omega), ("amplitude", amp)),
        inner_radius=float(r_in),
        phase_rate=rate,
    )
    return validate(sym)


def make_slow_decay(alpha: float, beta: float, cutoff_radius: float = 1.0) -> Symbol:
    """``e^{i|xi|^alpha} cut(|xi|) |xi|^{-beta}`` with a smooth cutoff at ``cutoff_radius``."""
    if not (0 < alpha < 1):
        raise InvalidParameter("alpha must lie in (0, 1)")
    if not beta > 0:
        raise InvalidParameter("beta must be positive")
    if not cutoff_radius > 0:
        raise InvalidParameter("cutoff radius must be positive")
    c = float(cutoff_radius)

    def h(r):
        r = np.asarray(r, dtype=float)
        out = np.zeros(r.shape, dtype=complex)
        mask = r > c
        rm = r[mask]
        out[mask] = np.exp(1j * rm**alpha) * _cut_above(rm, c) * rm ** (-beta)
        return out

    sym = make_radial(
        h,
        name="slow_decay",
        params=(("alpha", alpha), ("beta", beta), ("cutoff", c)),
        inner_radius=c,
        decay=float(beta),
        phase_rate=lambda r: alpha * np.asarray(r, dtype=float) ** alpha,
        targets=(("critical_s", beta / alpha),),
    )
    return validate(sym)


def make_halfwave_difference(alpha: float, beta: float, t: float) -> Symbol:
    """``(e^{i t |xi|^alpha} - 1) / t^beta``."""
    if not (0 < alpha <= 1):
        raise InvalidParameter("alpha must lie in (0, 1]")
    if not (0.5 < beta <= 1):
        raise InvalidParameter("beta must lie in (1/2, 1]")
    if not t > 0:
        raise InvalidParameter("t must be positive")
    scale = t ** (-beta)

    def h(r):
        theta = t * np.asarray(r, dtype=float) ** alpha
        # e^{i theta} - 1 = 2i sin(theta/2) e^{i theta/2}, free of cancellation
        return scale * 2j * np.sin(0.5 * theta) * np.exp(0.5j * theta)

    sym = make_radial(
        h,
        name="halfwave",
        params=(("alpha", alpha), ("beta", beta), ("t", t)),
        smooth_at_origin=alpha == 1,
        phase_rate=lambda r: alpha * t * np.asarray(r, dtype=float) ** alpha,
    )
    return validate(sym)


def make_limited_decay(a: float, b: float, omega: float = 1.0, cutoff_radius: float = 1.0) -> Symbol:
    """Model symbol ``cut(|xi|) [(1+|xi|)^{-a} + e^{i omega |xi|} (1+|xi|)^{-b}]``.

    The first term is a Mikhlin symbol of order ``-a``; in the second each
    derivative costs nothing in size, so a shell ``L^2_s`` norm behaves like
    ``2^{-j(b-s)}``. Together the shells decay like ``2^{-j min(a, b-s)}``.
    """
    if not a > 0:
        raise InvalidParameter("a must be positive")
    if not b > 0.5:
        raise InvalidParameter("b must exceed 1/2")
    c = float(cutoff_radius)

    def h(r):
        r = np.asarray(r, dtype=float)
        out = np.zeros(r.shape, dtype=complex)
        mask = r > c
        rm = r[mask]
        out[mask] = _cut_above(rm, c) * ((1.0 + rm) ** (-a) + np.exp(1j * omega * rm) * (1.0 + rm) ** (-b))
        return out

    sym = make_radial(
        h,
        name="limited_decay",
        params=(("a", a), ("b", b), ("omega", omega), ("cutoff", c)),
        inner_radius=c,
        decay=float(min(a, b)),
        phase_rate=lambda r: omega * np.asarray(r, dtype=float),
        targets=(("a", a), ("b", b)),
    )
    return validate(sym)


# -- Bessel J0 -------------------------------------------------------------

_SWITCH = 12.0


def _j0_series(x):
    q = -0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for k in range(1, 80):
        term = term * q / (k * k)
        total = total + term
        if np.all(np.abs(term) < 1e-18):
            break
    return total


def _j0_asymptotic(x):
    # Hankel expansion; b_k = a_k(0) / x^k, truncated per point at the smallest term
    p = np.ones_like(x)
    q = np.zeros_like(x)
    b = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)
    prev = np.ones_like(x)
    for k in range(1, 80):
        b = b * (-((2 * k - 1) ** 2)) / (8.0 * k * x)
        mag = np.abs(b)
        active &= mag < prev
        if not np.any(active):
            break
        prev = np.where(active, mag, prev)
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            q = q + np.where(active, sign * b, 0.0)
        else:
            p = p + np.where(active, sign * b, 0.0)
    chi = x - 0.25 * np.pi
    return np.sqrt(2.0 / (np.pi * x)) * (p * np.cos(chi) - q * np.sin(chi))


def bessel_j0(x):
    """Bessel ``J_0`` from its power series below 12 and Hankel's expansion above."""
    x = np.abs(np.asarray(x, dtype=float))
    out = np.empty_like(x)
    small = x < _SWITCH
    out[small] = _j0_series(x[small])
    if np.any(~small):
        out[~small] = _j0_asymptotic(x[~small])
    return out if out.ndim else float(out)


def make_surface_measure(d: int) -> Symbol:
    """Fourier transform of the normalised surface measure of the unit sphere."""
    if d == 3:

        def h(r):
            z = 2.0 * np.pi * np.asarray(r, dtype=float)
            safe = np.where(z == 0, 1.0, z)
            return np.where(z == 0, 1.0, np.sin(safe) / safe).astype(complex)

    elif d == 2:

        def h(r):
            return np.asarray(bessel_j0(2.0 * np.pi * np.asarray(r, dtype=float)), dtype=complex)

    else:
        raise InvalidParameter(f"surface measure symbol is available for d in {{2, 3}}, got {d}")
    sym = make_radial(h, name="sphere", params=(("d", d),), decay=(d - 1) / 2.0)
    return validate(sym)


# ---------------------------------------------------------------------------


def _value_at_origin(m: Symbol, dim: int) -> complex:
    zero = np.zeros((1, dim))
    with np.errstate(all="ignore"):
        try:
            v = complex(np.asarray(m(zero)).ravel()[0])
        except (ArithmeticError, ValueError):
            v = complex(np.nan)
    if np.isfinite(v):
        return v
    # fall back to the limit along the first axis
    vals = []
    for delta in (1e-4, 1e-6, 1e-8):
        pt = zero.copy()
        pt[0, 0] = delta
        with np.errstate(all="ignore"):
            vals.append(complex(np.asarray(m(pt)).ravel()[0]))
    if not all(np.isfinite(vals)) or abs(vals[-1] - vals[-2]) > 1e-6 * max(1.0, abs(vals[-1])):
        raise PreconditionError(f"{m.name} has no finite limit at the origin")
    return vals[-1]


def split_at_origin(m: Symbol, phi0: Symbol, dim: int = 1):
    """``(m0, m1)`` with ``m0 = m(0) phi0`` and ``m1 = m phi0 - m(0) phi0``."""
    c = _value_at_origin(m, dim)
    m0 = phi0 * c
    m0 = replace(m0, name="origin_part", params=(("value", c),))
    m1 = m * phi0 - m0
    m1 = replace(m1, name="split_remainder", params=(("of", m.name), ("value", c)))
    return m0, m1


# ---------------------------------------------------------------------------


def validate(m: Symbol, seed: int = 7, samples: int = 64) -> Symbol:
    """Spot-check the metadata of ``m``; returns ``m`` unchanged on success."""
    rng = np.random.default_rng(seed)
    scale = max(4.0, 4.0 * (m.inner_radius or 0.0))
    if m.radial:
        for d in (1, 2, 3):
            pts = rng.normal(size=(samples, d))
            pts *= (scale * rng.random(samples) / _radius(pts))[:, None]
            q, _ = np.linalg.qr(rng.normal(size=(d, d)))
            a, b = m(pts), m(pts @ q.T)
            if not np.allclose(a, b, rtol=1e-12, atol=1e-12):
                raise ContractViolation(f"{m.name} is flagged radial but is not rotation invariant")
    if m.inner_radius:
        for d in (1, 2, 3):
            pts = rng.normal(size=(samples, d))
            pts *= (m.inner_radius * rng.random(samples) / _radius(pts))[:, None]
            if np.any(m(pts) != 0):
                raise ContractViolation(f"{m.name} does not vanish inside radius {m.inner_radius}")
    return m


# ---------------------------------------------------------------------------
# registry used by configuration files


def _sphere_split(d: int = 3):
    m = make_surface_measure(d)
    return split_at_origin(m, make_bump(), dim=d)[1]


FAMILIES = {
    "constant": make_constant,
    "window": lambda: make_window(),
    "bump": lambda: make_bump(),
    "annulus": make_annulus,
    "slow_decay": make_slow_decay,
    "halfwave": make_halfwave_difference,
    "limited_decay": make_limited_decay,
    "sphere": make_surface_measure,
    "sphere_split": _sphere_split,
}


def from_spec(spec: dict) -> Symbol:
    """Build a symbol from ``{"family": name, "params": {...}}``."""
    if not isinstance(spec, dict) or "family" not in spec:
        raise InvalidParameter(f"symbol spec needs a 'family' key: {spec!r}")
    name = spec["family"]
    if name not in FAMILIES:
        raise InvalidParameter(f"unknown symbol family {name!r}; known: {sorted(FAMILIES)}")
    params = dict(spec.get("params", {}))
    try:
        sym = FAMILIES[name](**params)
    except TypeError as exc:
        raise InvalidParameter(f"bad parameters for {name}: {exc}") from exc
    if name in ("window", "bump", "sphere_split"):
        sym = replace(sym, params=tuple(params.items()) or sym.params)
    return sym


def gamma_ratio(kappa: float, eps: float) -> float:
    """Closed-form factor ``m~/m`` for a symbol homogeneous of degree ``kappa``."""
    return math.gamma(kappa + 1.0) * math.gamma(0.5 - eps) / math.gamma(kappa + 0.5 - eps)
