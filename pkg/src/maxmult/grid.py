"""Periodic sampling grids, complex fields and the scaled discrete Fourier transform.

The physical box is ``[-L, L)^d`` sampled with ``N`` points per axis and
spacing ``h = 2L/N``. The matching frequency lattice is centred: index ``k``
along an axis corresponds to ``(k - N/2) / (2L)``. With this layout

    forward_transform(f)[k] ~= integral f(x) exp(-2 pi i x.xi_k) dx

is the Riemann sum of the continuous transform, and ``inverse_transform``
inverts it exactly on lattice data.

Fields serialise to a small binary container::

    offset  size  content
    0       8     magic b"MXFIELD1"
    8       4     dim            (uint32, little endian)
    12      4     N              (uint32)
    16      8     L              (float64)
    24      1     domain tag     (0 physical, 1 frequency)
    25      1     payload kind   (0 complex128, 1 int64)
    26      6     zero padding
    32      ...   payload, row-major; complex values as interleaved re/im float64
"""

from __future__ import annotations

import enum
import struct
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import ContractViolation, InvalidParameter

__all__ = [
    "Domain",
    "Grid",
    "Field",
    "forward_transform",
    "inverse_transform",
    "lebesgue_norm",
    "write_field",
    "read_field",
    "write_lattice",
    "read_lattice",
]


class Domain(enum.Enum):
    PHYSICAL = 0
    FREQUENCY = 1


@dataclass(frozen=True)
class Grid:
    """Uniform periodic grid on ``[-L, L)^dim`` with ``N`` samples per axis."""

    dim: int
    N: int
    L: float

    def __post_init__(self):
        if self.dim not in (1, 2, 3):
            raise InvalidParameter(f"dim must be 1, 2 or 3, got {self.dim}")
        n = int(self.N)
        if n < 2 or n & (n - 1):
            raise InvalidParameter(f"N must be a power of two, got {self.N}")
        if not self.L > 0:
            raise InvalidParameter(f"half width must be positive, got {self.L}")
        object.__setattr__(self, "N", n)
        object.__setattr__(self, "L", float(self.L))

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def dxi(self) -> float:
        return 1.0 / (2.0 * self.L)

    @property
    def nyquist(self) -> float:
        return self.N / (4.0 * self.L)

    @property
    def shape(self) -> tuple:
        return (self.N,) * self.dim

    def cell(self, domain: Domain) -> float:
        """Volume of one lattice cell in the given domain."""
        step = self.h if domain is Domain.PHYSICAL else self.dxi
        return step**self.dim

    @cached_property
    def x_axis(self) -> np.ndarray:
        return -self.L + self.h * np.arange(self.N)

    @cached_property
    def xi_axis(self) -> np.ndarray:
        return (np.arange(self.N) - self.N // 2) * self.dxi

    def axis(self, domain: Domain) -> np.ndarray:
        return self.x_axis if domain is Domain.PHYSICAL else self.xi_axis

    def mesh(self, domain: Domain) -> tuple:
        ax = self.axis(domain)
        return np.meshgrid(*([ax] * self.dim), indexing="ij")

    def points(self, domain: Domain) -> np.ndarray:
        """All lattice points as an array of shape ``(N**dim, dim)``, row-major."""
        return np.stack([m.ravel() for m in self.mesh(domain)], axis=-1)

    def radius(self, domain: Domain) -> np.ndarray:
        """Euclidean norm of every lattice point, shaped like the grid."""
        m = self.mesh(domain)
        return np.sqrt(sum(c * c for c in m))

    def dual(self) -> "Grid":
        """Grid whose physical lattice is this grid's frequency lattice.

        Used to Fourier-analyse functions of the frequency variable (symbol
        shells): the dual has spacing ``dxi`` and half width ``nyquist``.
        """
        return Grid(self.dim, self.N, self.nyquist)

    def refined(self, keep: str = "box") -> "Grid":
        """Twice the samples per axis.

        ``keep="box"`` halves the physical spacing (Nyquist doubles);
        ``keep="band"`` halves the frequency spacing (box doubles, Nyquist kept).
        """
        if keep == "box":
            return Grid(self.dim, 2 * self.N, self.L)
        if keep == "band":
            return Grid(self.dim, 2 * self.N, 2 * self.L)
        raise InvalidParameter(f"unknown refinement mode {keep!r}")

    def zeros(self, domain: Domain) -> "Field":
        return Field(self, domain, np.zeros(self.shape, dtype=complex))

    def sample(self, fn, domain: Domain = Domain.PHYSICAL) -> "Field":
        """Field of ``fn`` evaluated on the lattice; ``fn`` takes ``(n, dim)`` points."""
        vals = np.asarray(fn(self.points(domain)), dtype=complex)
        return Field(self, domain, vals.reshape(self.shape))


@dataclass(frozen=True, eq=False)
class Field:
    """Complex samples over a grid, tagged with the domain they live in."""

    grid: Grid
    domain: Domain
    values: np.ndarray

    def __post_init__(self):
        if not isinstance(self.domain, Domain):
            raise ContractViolation(f"domain must be a Domain, got {self.domain!r}")
        vals = np.asarray(self.values, dtype=complex)
        if vals.size != self.grid.N**self.grid.dim:
            raise ContractViolation(
                f"expected {self.grid.N ** self.grid.dim} samples, got {vals.size}"
            )
        vals = vals.reshape(self.grid.shape)
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def with_values(self, values) -> "Field":
        return Field(self.grid, self.domain, values)

    def reinterpret(self) -> "Field":
        """Read frequency-side samples as a physical-side function on the dual grid."""
        if self.domain is not Domain.FREQUENCY:
            raise ContractViolation("only frequency-domain fields can be reinterpreted")
        return Field(self.grid.dual(), Domain.PHYSICAL, self.values)

    def __add__(self, other: "Field") -> "Field":
        _same_space(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "Field") -> "Field":
        _same_space(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, c) -> "Field":
        return self.with_values(self.values * c)

    __rmul__ = __mul__


def _same_space(a: Field, b: Field) -> None:
    if a.grid != b.grid or a.domain is not b.domain:
        raise ContractViolation("fields live on different grids or domains")


def forward_transform(f: Field) -> Field:
    """Approximate continuous Fourier transform ``f^(xi) = int f(x) e^{-2 pi i x.xi} dx``."""
    if f.domain is not Domain.PHYSICAL:
        raise ContractViolation("forward_transform expects a physical-domain field")
    g = f.grid
    spec = np.fft.fftshift(np.fft.fftn(np.fft.ifftshift(f.values)))
    return Field(g, Domain.FREQUENCY, spec * g.cell(Domain.PHYSICAL))


def inverse_transform(F: Field) -> Field:
    """Exact inverse of :func:`forward_transform` on lattice data."""
    if F.domain is not Domain.FREQUENCY:
        raise ContractViolation("inverse_transform expects a frequency-domain field")
    g = F.grid
    vals = np.fft.fftshift(np.fft.ifftn(np.fft.ifftshift(F.values)))
    return Field(g, Domain.PHYSICAL, vals / g.cell(Domain.PHYSICAL))


def lebesgue_norm(f: Field, p: float) -> float:
    """Riemann-sum ``L^p`` norm; ``p = inf`` gives the lattice maximum of ``|f|``."""
    p = float(p)
    if not (p >= 1.0):
        raise InvalidParameter(f"p must be >= 1, got {p}")
    a = np.abs(f.values)
    if np.isinf(p):
        return float(a.max()) if a.size else 0.0
    cell = f.grid.cell(f.domain)
    if p == 2.0:
        return float(np.sqrt(cell * np.sum(a * a)))
    peak = a.max()
    if peak == 0.0:
        return 0.0
    # scale out the peak so large p does not overflow
    return float(peak * (cell * np.sum((a / peak) ** p)) ** (1.0 / p))


# ---------------------------------------------------------------------------
# binary container

_MAGIC = b"MXFIELD1"
_HEADER = struct.Struct("<8sIIdBB6x")
_KIND_COMPLEX = 0
_KIND_INT = 1


def _write(path, grid: Grid, domain: Domain, kind: int, payload: np.ndarray) -> None:
    header = _HEADER.pack(_MAGIC, grid.dim, grid.N, grid.L, domain.value, kind)
    with open(Path(path), "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(payload).tobytes(order="C"))


def _read(path):
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ContractViolation(f"{path}: truncated header")
    magic, dim, n, half, dom, kind = _HEADER.unpack_from(raw)
    if magic != _MAGIC:
        raise ContractViolation(f"{path}: bad magic {magic!r}")
    grid = Grid(dim, n, half)
    body = raw[_HEADER.size:]
    dtype = np.dtype("<c16") if kind == _KIND_COMPLEX else np.dtype("<i8")
    if len(body) != dtype.itemsize * n**dim:
        raise ContractViolation(f"{path}: payload size does not match header")
    arr = np.frombuffer(body, dtype=dtype).reshape(grid.shape)
    return grid, Domain(dom), kind, arr


def write_field(f: Field, path) -> None:
    """Store ``f`` in the binary container format described in the module docstring."""
    _write(path, f.grid, f.domain, _KIND_COMPLEX, f.values.astype("<c16"))


def read_field(path) -> Field:
    grid, dom, kind, arr = _read(path)
    if kind != _KIND_COMPLEX:
        raise ContractViolation(f"{path}: container holds an integer lattice")
    return Field(grid, dom, arr.astype(complex))


def write_lattice(grid: Grid, domain: Domain, values: np.ndarray, path) -> None:
    """Store an integer lattice (e.g. maximiser indices) in the same container."""
    vals = np.asarray(values)
    if vals.size != grid.N**grid.dim:
        raise ContractViolation("lattice size does not match grid")
    _write(path, grid, domain, _KIND_INT, vals.reshape(grid.shape).astype("<i8"))


def read_lattice(path):
    grid, dom, kind, arr = _read(path)
    if kind != _KIND_INT:
        raise ContractViolation(f"{path}: container holds a complex field")
    return grid, dom, arr.astype(np.int64)
