"""
Masked uniform finite-difference discretization of disks and rectangles
with homogeneous Dirichlet boundary values.

Interior nodes are numbered ``0..N-1`` in row-major order of the lattice.
Every operator here works on the flat vector of interior values; neighbors
outside the mask read as zero.
"""
import logging
import math

import numpy as np

from kirchlab._rtconfig import KL, kl_exc_args
from kirchlab.constants import (
    SHAPE_DISK, SHAPE_RECTANGLE, INTERIOR_MARGIN, KL_EXC_RESOLUTION,
    KL_EXC_SOLVER
)

log = logging.getLogger(__name__)


class DomainSpec(object):
    __slots__ = ['_shape', '_radius', '_center', '_width', '_height']

    def __init__(self, shape, radius=1.0, center=(0.0, 0.0), width=1.0,
                 height=1.0):
        if shape == SHAPE_DISK:
            if not radius > 0:
                kl_exc_args('Disk radius must be positive', obj=radius)
        elif shape == SHAPE_RECTANGLE:
            if not (width > 0 and height > 0):
                kl_exc_args('Rectangle sides must be positive',
                            obj=(width, height))
        else:
            kl_exc_args('Unknown domain shape', obj=shape)

        self._shape = shape
        self._radius = float(radius)
        self._center = (float(center[0]), float(center[1]))
        self._width = float(width)
        self._height = float(height)

    @classmethod
    def disk(cls, radius=1.0, center=(0.0, 0.0)):
        return cls(SHAPE_DISK, radius=radius, center=center)

    @classmethod
    def rectangle(cls, width=1.0, height=1.0):
        return cls(SHAPE_RECTANGLE, width=width, height=height)

    shape = property(lambda self: self._shape)
    radius = property(lambda self: self._radius)
    center = property(lambda self: self._center)
    width = property(lambda self: self._width)
    height = property(lambda self: self._height)

    @property
    def inradius(self):
        if self._shape == SHAPE_DISK:
            return self._radius
        return 0.5 * min(self._width, self._height)

    @property
    def incenter(self):
        if self._shape == SHAPE_DISK:
            return self._center
        return (0.5 * self._width, 0.5 * self._height)

    @property
    def area(self):
        if self._shape == SHAPE_DISK:
            return math.pi * self._radius ** 2
        return self._width * self._height

    def bounding_box(self):
        """
        :return: ``(x_lo, y_lo, x_hi, y_hi)``
        """
        if self._shape == SHAPE_DISK:
            cx, cy = self._center
            r = self._radius
            return cx - r, cy - r, cx + r, cy + r
        return 0.0, 0.0, self._width, self._height

    def strictly_inside(self, x, y, margin=0.0):
        """
        Vectorised membership test; points closer than `margin` to the
        boundary are outside.
        """
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if self._shape == SHAPE_DISK:
            cx, cy = self._center
            lim = self._radius - margin
            return (x - cx) ** 2 + (y - cy) ** 2 < lim * lim
        return ((x > margin) & (x < self._width - margin) &
                (y > margin) & (y < self._height - margin))

    def contains_ball(self, center, radius):
        cx, cy = center
        if self._shape == SHAPE_DISK:
            dist = math.hypot(cx - self._center[0], cy - self._center[1])
            return dist + radius <= self._radius * (1 + 1e-12)
        tol = 1e-12 * max(self._width, self._height)
        return (cx - radius >= -tol and cy - radius >= -tol and
                cx + radius <= self._width + tol and
                cy + radius <= self._height + tol)

    def to_dict(self):
        if self._shape == SHAPE_DISK:
            return {'shape': self._shape, 'radius': self._radius,
                    'center': list(self._center)}
        return {'shape': self._shape, 'width': self._width,
                'height': self._height}

    def __repr__(self):
        return 'DomainSpec({0!r})'.format(self.to_dict())


class Grid(object):
    """
    Lattice ``origin + (i h, j h)`` over the bounding box of a domain, with
    the interior mask and the neighbor table of the 5-point stencil.

    ``neighbors`` has shape ``(N, 4)``; entries are interior indices or
    ``-1`` for a boundary (zero) neighbor.
    """

    def __init__(self, spec, h):
        self.spec = spec
        self.h = float(h)
        x_lo, y_lo, x_hi, y_hi = spec.bounding_box()
        self.origin = (x_lo, y_lo)
        self.nx = int(math.floor((x_hi - x_lo) / self.h + 1e-9)) + 1
        self.ny = int(math.floor((y_hi - y_lo) / self.h + 1e-9)) + 1

        xs = x_lo + self.h * np.arange(self.nx)
        ys = y_lo + self.h * np.arange(self.ny)
        gx, gy = np.meshgrid(xs, ys, indexing='ij')
        mask = spec.strictly_inside(gx, gy, margin=INTERIOR_MARGIN * self.h)

        ii, jj = np.nonzero(mask)
        self.N = int(ii.size)
        if not self.N:
            KL.exc_common(KL_EXC_RESOLUTION,
                          'Grid has no interior nodes',
                          objextra=spec.to_dict(), h=self.h)

        index = np.full((self.nx + 2, self.ny + 2), -1, dtype=np.int64)
        index[ii + 1, jj + 1] = np.arange(self.N)
        nbr = np.empty((self.N, 4), dtype=np.int64)
        nbr[:, 0] = index[ii, jj + 1]
        nbr[:, 1] = index[ii + 2, jj + 1]
        nbr[:, 2] = index[ii + 1, jj]
        nbr[:, 3] = index[ii + 1, jj + 2]

        coords = np.column_stack([xs[ii], ys[jj]])
        for arr in (mask, index, nbr, coords):
            arr.setflags(write=False)

        self.mask = mask
        self.index = index
        self.ii = ii
        self.jj = jj
        self.neighbors = nbr
        self.coords = coords
        self.cell_area = self.h * self.h
        self.d = spec.inradius
        self.x0 = spec.incenter

    @property
    def shape(self):
        return self.spec.shape

    def contains_ball(self, center, radius):
        return self.spec.contains_ball(center, radius)

    def to_dict(self):
        return {
            'domain': self.spec.to_dict(), 'h': self.h, 'd': self.d,
            'x0': list(self.x0), 'N': self.N,
            'lattice': [self.nx, self.ny]
        }

    def __repr__(self):
        return 'Grid(shape={0}, h={1!r}, N={2})'.format(
            self.shape, self.h, self.N)


def build_grid(spec, h):
    """
    Discretize `spec` with spacing `h`.

    :raise ResolutionError: if no node lies strictly inside the domain
    """
    if not h > 0:
        kl_exc_args('Grid spacing must be positive', obj=h)
    grid = Grid(spec, h)
    log.debug('grid: shape=%s h=%.6g N=%d d=%.6g', grid.shape, grid.h,
              grid.N, grid.d)
    return grid


class Field(object):
    """
    Values on the interior nodes of a :class:`Grid`. The value array is
    read-only; arithmetic returns new fields.
    """
    __slots__ = ['grid', 'values']

    def __init__(self, grid, values):
        arr = np.array(values, dtype=float).reshape(-1)
        if arr.size != grid.N:
            kl_exc_args('Field size does not match the grid',
                        obj=(arr.size, grid.N))
        if not np.all(np.isfinite(arr)):
            kl_exc_args('Field values must be finite')
        arr.setflags(write=False)
        self.grid = grid
        self.values = arr

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.N))

    @classmethod
    def from_function(cls, grid, func):
        """
        Interpolate ``func(x, y)`` (vectorised over node coordinates).
        """
        xy = grid.coords
        vals = np.broadcast_to(np.asarray(func(xy[:, 0], xy[:, 1]),
                                          dtype=float), (grid.N,))
        return cls(grid, vals)

    def _other(self, other):
        if isinstance(other, Field):
            if other.grid is not self.grid:
                kl_exc_args('Fields live on different grids')
            return other.values
        return other

    def __add__(self, other):
        return Field(self.grid, self.values + self._other(other))

    def __sub__(self, other):
        return Field(self.grid, self.values - self._other(other))

    def __mul__(self, scalar):
        if isinstance(scalar, Field):
            return NotImplemented
        return Field(self.grid, self.values * float(scalar))

    __rmul__ = __mul__
    __radd__ = __add__

    def __truediv__(self, scalar):
        return Field(self.grid, self.values / float(scalar))

    def __neg__(self):
        return Field(self.grid, -self.values)

    @property
    def size(self):
        return self.values.size

    def max(self):
        return float(np.max(self.values))

    def min(self):
        return float(np.min(self.values))

    def positive_part(self):
        return Field(self.grid, np.maximum(self.values, 0.0))

    def is_zero(self):
        return not np.any(self.values)

    def l2_norm(self):
        return math.sqrt(self.grid.cell_area *
                         float(np.dot(self.values, self.values)))

    def to_array(self, fill=0.0):
        """
        Lattice array of shape ``(nx, ny)`` with `fill` outside the mask.
        """
        grid = self.grid
        out = np.full((grid.nx, grid.ny), fill)
        out[grid.ii, grid.jj] = self.values
        return out

    def __repr__(self):
        return 'Field(N={0}, min={1:.6g}, max={2:.6g})'.format(
            self.size, self.min(), self.max())


def _c_kernel():
    if not KL.use_cffi:
        return None
    from kirchlab import _cinit
    try:
        return _cinit.get_handle()
    except Exception as e:
        log.warning('cffi: stencil kernel unavailable, using numpy: %s', e)
        KL.configure('use_cffi', False)
        return None


def laplacian_values(grid, vals):
    """
    ``-Delta_h`` applied to a flat vector of interior values.
    """
    handle = _c_kernel()
    if handle is not None:
        from kirchlab._cinit import apply_laplacian_c
        return apply_laplacian_c(handle, grid.neighbors, vals,
                                 1.0 / grid.cell_area)
    ext = np.append(vals, 0.0)
    nsum = ext[grid.neighbors].sum(axis=1)
    return (4.0 * vals - nsum) / grid.cell_area


def apply_laplacian(u):
    """
    :return: The field ``-Delta_h u``
    """
    return Field(u.grid, laplacian_values(u.grid, u.values))


def dirichlet_energy(u):
    """
    Discrete ``int |grad u|^2``: the sum over lattice edges of squared
    differences, with zero values outside the mask.
    """
    arr = np.pad(u.to_array(), 1)
    dx = np.diff(arr, axis=0)
    dy = np.diff(arr, axis=1)
    return float(np.sum(dx * dx) + np.sum(dy * dy))


def dirichlet_inner(u, v):
    """
    Discrete Dirichlet inner product ``h^2 u . (-Delta_h v)``.
    """
    return u.grid.cell_area * float(
        np.dot(u.values, laplacian_values(v.grid, v.values)))


def integrate(g, u):
    """
    Midpoint quadrature ``sum_nodes g(x, u(x)) h^2``.

    :param g: Callable ``g(x, s)``; `x` is the ``(N, 2)`` coordinate array
        and `s` the node values. Scalars are broadcast.
    """
    grid = u.grid
    vals = np.broadcast_to(np.asarray(g(grid.coords, u.values), dtype=float),
                           (grid.N,))
    return grid.cell_area * float(np.sum(vals))


def cg_iteration_cap(n):
    return int(50 * math.sqrt(n)) + 1000


def _pcg(grid, b, tol):
    """
    Jacobi-preconditioned conjugate gradients for ``-Delta_h x = b``.

    :return: ``(x, iterations, relative_residual)``
    """
    n = b.size
    bnorm = float(np.linalg.norm(b))
    if bnorm == 0:
        return np.zeros(n), 0, 0.0

    dinv = grid.cell_area / 4.0
    x = np.zeros(n)
    r = b.copy()
    z = dinv * r
    p = z.copy()
    rz = float(np.dot(r, z))
    cap = cg_iteration_cap(n)
    rel = 1.0

    for it in range(1, cap + 1):
        ap = laplacian_values(grid, p)
        alpha = rz / float(np.dot(p, ap))
        x += alpha * p
        r -= alpha * ap
        rel = float(np.linalg.norm(r)) / bnorm
        if rel <= tol:
            # recursive residual drifts; confirm against the true one
            r = b - laplacian_values(grid, x)
            rel = float(np.linalg.norm(r)) / bnorm
            if rel <= tol:
                return x, it, rel
            z = dinv * r
            p = z.copy()
            rz = float(np.dot(r, z))
            continue
        z = dinv * r
        rz_new = float(np.dot(r, z))
        p = z + (rz_new / rz) * p
        rz = rz_new

    KL.exc_common(KL_EXC_SOLVER, 'Conjugate gradients did not converge',
                  residual=rel, iterations=cap, tol=tol)


def poisson_solve(rhs, tol=None):
    """
    Solve ``-Delta_h v = rhs`` with zero boundary values.

    :param rhs: The right hand side :class:`Field`
    :param tol: Relative residual tolerance; defaults to ``KL.cg_tol``
    :return: The solution :class:`Field`
    :raise SolverError: if the iteration cap is reached; the error carries
        the final ``residual``
    """
    tol = KL.cg_tol if tol is None else tol
    if not tol > 0:
        kl_exc_args('Tolerance must be positive', obj=tol)
    x, its, rel = _pcg(rhs.grid, np.asarray(rhs.values, dtype=float), tol)
    log.debug('cg: N=%d iterations=%d residual=%.3e', rhs.size, its, rel)
    return Field(rhs.grid, x)
