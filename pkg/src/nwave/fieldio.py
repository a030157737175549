"""Binary and CSV serialization of 2-D grid fields.

Binary layout (all little-endian):

====== ======= ==========================================
offset format  meaning
====== ======= ==========================================
0      4s      magic ``b"NWAV"``
4      u4      format version (currently 1)
8      u8      n_rho (outer extent)
16     u8      n_theta (inner extent)
24     f8      d_rho
32     f8      d_theta
40     f8      sigma at which the field was recorded
48     f8[...] n_rho*n_theta values, row-major (rho outer)
====== ======= ==========================================

The same container is reused for velocity-field tables over (sigma, rho);
there the extents/spacings are (n_sigma_nodes, n_rho_nodes) and
(d_sigma, d_rho), and the trailing header float is 0.
"""

from __future__ import annotations

import struct

import numpy as np

from .grid import Field2D

MAGIC = b"NWAV"
VERSION = 1
_HEADER = struct.Struct("<4sIQQddd")


def write_field_binary(path, field: Field2D, d_rho: float, d_theta: float,
                       sigma: float) -> None:
    write_grid_binary(path, field.values, d_rho, d_theta, sigma)


def read_field_binary(path):
    """Returns (field, d_rho, d_theta, sigma)."""
    values, d0, d1, aux = read_grid_binary(path)
    return Field2D(values), d0, d1, aux


def write_grid_binary(path, values: np.ndarray, d0: float, d1: float,
                      aux: float = 0.0) -> None:
    arr = np.ascontiguousarray(values, dtype="<f8")
    if arr.ndim != 2:
        raise ValueError("binary grid format stores 2-D arrays only")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, arr.shape[0], arr.shape[1],
                              float(d0), float(d1), float(aux)))
        fh.write(arr.tobytes())


def read_grid_binary(path):
    with open(path, "rb") as fh:
        head = fh.read(_HEADER.size)
        if len(head) != _HEADER.size:
            raise IOError(f"{path}: truncated header")
        magic, version, n0, n1, d0, d1, aux = _HEADER.unpack(head)
        if magic != MAGIC:
            raise IOError(f"{path}: bad magic {magic!r}")
        if version != VERSION:
            raise IOError(f"{path}: unsupported version {version}")
        data = np.frombuffer(fh.read(8 * n0 * n1), dtype="<f8")
        if data.size != n0 * n1:
            raise IOError(f"{path}: truncated payload")
    return data.reshape(n0, n1).copy(), d0, d1, aux


def write_field_csv(path, field: Field2D, rho_nodes: np.ndarray,
                    theta_nodes: np.ndarray) -> None:
    """Flat (rho, theta, V) rows for plotting."""
    if field.n_rho != len(rho_nodes) or field.n_theta != len(theta_nodes):
        raise ValueError("write_field_csv: axes do not match field extents")
    rr, tt = np.meshgrid(rho_nodes, theta_nodes, indexing="ij")
    table = np.column_stack([rr.ravel(), tt.ravel(), field.values.ravel()])
    np.savetxt(path, table, delimiter=",", header="rho,theta,V", comments="")
