"""Regenerate the golden field files from closed forms.

The container is written here with ``struct`` directly, independent of
``maxmult.grid``, so the tests compare the library against this layout.

    python tests/data/make_golden.py
"""

import struct
from pathlib import Path

import numpy as np

HERE = Path(__file__).parent
HEADER = struct.Struct("<8sIIdBB6x")


def write(path, dim, n, half, domain, kind, payload):
    with open(path, "wb") as fh:
        fh.write(HEADER.pack(b"MXFIELD1", dim, n, half, domain, kind))
        fh.write(payload.tobytes(order="C"))


def main():
    # exp(-pi |x|^2) on [-4, 4), N = 64, physical domain
    x = -4.0 + 0.125 * np.arange(64)
    write(HERE / "gauss_1d.bin", 1, 64, 4.0, 0, 0, np.exp(-np.pi * x * x).astype("<c16"))
    # exp(-pi |x|^2 + 2 pi i x_1) on [-2, 2)^2, N = 16
    x = -2.0 + 0.25 * np.arange(16)
    X, Y = np.meshgrid(x, x, indexing="ij")
    vals = np.exp(-np.pi * (X * X + Y * Y) + 2j * np.pi * X)
    write(HERE / "modulated_2d.bin", 2, 16, 2.0, 0, 0, vals.astype("<c16"))
    # integer lattice k0 + 8 k1 on a 3-d frequency grid, N = 8
    k = np.arange(8)
    K = k[:, None, None] + 8 * k[None, :, None] + 64 * k[None, None, :]
    write(HERE / "index_3d.bin", 3, 8, 1.0, 1, 1, K.astype("<i8"))


if __name__ == "__main__":
    main()
