"""Sampled complex solution values on a rectilinear (T, X, Y) grid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_MAGIC = np.int64(0x43574656)  # 'CWFV'


@dataclass(frozen=True)
class ComplexField:
    """Complex values on the tensor grid t_axis x x_axis x y_axis.

    Axes are strictly increasing 1-d arrays; ``values`` has shape
    (len(t_axis), len(x_axis), len(y_axis)).  Instances are immutable and
    validated on construction (no NaN, conforming shape).
    """

    t_axis: np.ndarray
    x_axis: np.ndarray
    y_axis: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        for name in ("t_axis", "x_axis", "y_axis"):
            ax = np.asarray(getattr(self, name), dtype=float)
            if ax.ndim != 1 or ax.size == 0:
                raise ValueError(f"{name} must be a non-empty 1-d array")
            if ax.size > 1 and np.any(np.diff(ax) <= 0):
                raise ValueError(f"{name} must be strictly increasing")
            object.__setattr__(self, name, ax)
        vals = np.asarray(self.values, dtype=np.complex128)
        shape = (self.t_axis.size, self.x_axis.size, self.y_axis.size)
        if vals.shape != shape:
            raise ValueError(f"values shape {vals.shape} != axes shape {shape}")
        if not np.all(np.isfinite(vals)):
            raise ValueError("field contains non-finite values")
        object.__setattr__(self, "values", vals)

    @property
    def shape(self):
        return self.values.shape

    def slice_at(self, it: int) -> np.ndarray:
        """Spatial slice at time index ``it``."""
        return self.values[it]

    def save_binary(self, path):
        """Header (axis lengths + axis values as float64) then row-major pairs."""
        with open(path, "wb") as fh:
            np.array([_MAGIC, self.t_axis.size, self.x_axis.size,
                      self.y_axis.size], dtype=np.int64).tofile(fh)
            self.t_axis.astype(np.float64).tofile(fh)
            self.x_axis.astype(np.float64).tofile(fh)
            self.y_axis.astype(np.float64).tofile(fh)
            np.ascontiguousarray(self.values, dtype=np.complex128).tofile(fh)

    @classmethod
    def load_binary(cls, path) -> "ComplexField":
        with open(path, "rb") as fh:
            head = np.fromfile(fh, dtype=np.int64, count=4)
            if head.size != 4 or head[0] != _MAGIC:
                raise ValueError("not a ComplexField binary file")
            nt, nx, ny = (int(v) for v in head[1:])
            t = np.fromfile(fh, dtype=np.float64, count=nt)
            x = np.fromfile(fh, dtype=np.float64, count=nx)
            y = np.fromfile(fh, dtype=np.float64, count=ny)
            vals = np.fromfile(fh, dtype=np.complex128,
                               count=nt * nx * ny).reshape(nt, nx, ny)
        return cls(t_axis=t, x_axis=x, y_axis=y, values=vals)

    def to_csv(self, path, header_lines=()):
        """Rows ``T,X,Y,re,im,abs`` in T-major order, 17 significant digits."""
        with open(path, "w") as fh:
            for line in header_lines:
                fh.write(f"# {line}\n")
            fh.write("T,X,Y,re,im,abs\n")
            for it, T in enumerate(self.t_axis):
                for ix, X in enumerate(self.x_axis):
                    for iy, Y in enumerate(self.y_axis):
                        v = self.values[it, ix, iy]
                        fh.write(f"{T:.17g},{X:.17g},{Y:.17g},"
                                 f"{v.real:.17g},{v.imag:.17g},{abs(v):.17g}\n")
