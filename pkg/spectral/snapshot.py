"""
Snapshot Files
Binary persistence of vector fields: fixed little-endian header plus raw coefficients

Layout: magic "REULAB01", u32 n, f64 L, f64 time, u8 component count,
then complex128 coefficients component-major, k-index row-major.
"""

from pathlib import Path
from typing import Tuple, Union

import numpy as np
from loguru import logger

from spectral.errors import ArtifactError
from spectral.fields import SpectralScalarField, SpectralVectorField
from spectral.grid import Grid

MAGIC = b"REULAB01"

HEADER_DTYPE = np.dtype([
    ("magic", "S8"),
    ("n", "<u4"),
    ("box_size", "<f8"),
    ("time", "<f8"),
    ("ncomp", "u1"),
])

BODY_DTYPE = np.dtype("<c16")


def write_snapshot(path: Union[str, Path], field: Union[SpectralScalarField, SpectralVectorField], time: float) -> Path:
    """
    Write one field to a snapshot file

    Args:
        path: destination file (parent directories are created)
        field: scalar or vector field
        time: simulation time stamped into the header

    Returns:
        The written path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    ncomp = 3 if isinstance(field, SpectralVectorField) else 1
    header = np.zeros(1, dtype=HEADER_DTYPE)
    header["magic"] = MAGIC
    header["n"] = field.grid.n
    header["box_size"] = field.grid.box_size
    header["time"] = time
    header["ncomp"] = ncomp

    body = np.ascontiguousarray(field.coeffs, dtype=BODY_DTYPE)
    with open(path, "wb") as f:
        f.write(header.tobytes())
        f.write(body.tobytes(order="C"))

    logger.debug(f"Snapshot written: {path} (t={time:.6g}, n={field.grid.n})")
    return path


def read_snapshot(path: Union[str, Path]) -> Tuple[Union[SpectralScalarField, SpectralVectorField], float]:
    """
    Read a snapshot back into a field

    Returns:
        (field, time)

    Raises:
        ArtifactError: missing file, wrong magic, or truncated body
    """
    path = Path(path)
    if not path.exists():
        raise ArtifactError(f"snapshot not found: {path}")

    raw = path.read_bytes()
    if len(raw) < HEADER_DTYPE.itemsize:
        raise ArtifactError(f"snapshot {path} is shorter than its header")

    header = np.frombuffer(raw[:HEADER_DTYPE.itemsize], dtype=HEADER_DTYPE)[0]
    if bytes(header["magic"]) != MAGIC:
        raise ArtifactError(f"snapshot {path} has bad magic {bytes(header['magic'])!r}")

    n = int(header["n"])
    ncomp = int(header["ncomp"])
    if ncomp not in (1, 3):
        raise ArtifactError(f"snapshot {path} declares {ncomp} components")

    try:
        grid = Grid(n, float(header["box_size"]))
    except ValueError as e:
        raise ArtifactError(f"snapshot {path} has an invalid grid: {e}")

    expected = ncomp * n ** 3 * BODY_DTYPE.itemsize
    body_bytes = raw[HEADER_DTYPE.itemsize:]
    if len(body_bytes) != expected:
        raise ArtifactError(f"snapshot {path} body has {len(body_bytes)} bytes, expected {expected}")

    coeffs = np.frombuffer(body_bytes, dtype=BODY_DTYPE).astype(np.complex128)
    if ncomp == 3:
        field = SpectralVectorField(grid, coeffs.reshape((3,) + grid.shape))
    else:
        field = SpectralScalarField(grid, coeffs.reshape(grid.shape))
    return field, float(header["time"])
