"""Fourier-coefficient fields on the torus T^D, D in {1, 2}.

A field is stored as a complex coefficient array on the centered lattice
{k : |k_j| <= n}.  Every integral carries the normalized measure
d^D(theta) / (2 pi)^D, so the coefficients are orthonormal coordinates for
L^2 and Parseval reads  mean_grid |u|^2 = sum_k |c_k|^2.  The mass ball
{sum |c_k|^2 <= N} is therefore a Euclidean ball in coefficient space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.fft import next_fast_len


class GridResolutionError(ValueError):
    """Requested grid cannot resolve the lattice modes."""


@dataclass(frozen=True)
class Lattice:
    """Centered mode lattice {k : |k_j| <= n} with a default oversampling."""

    dim: int
    n: int
    oversample: int = 1

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        if self.n < 1:
            raise ValueError("cutoff n must be >= 1")
        if self.oversample < 1:
            raise ValueError("oversample factor must be >= 1")

    @property
    def modes_per_axis(self) -> int:
        return 2 * self.n + 1

    @property
    def shape(self) -> tuple:
        return (self.modes_per_axis,) * self.dim

    def axis_modes(self) -> np.ndarray:
        return np.arange(-self.n, self.n + 1)

    def mode_arrays(self) -> tuple:
        """Per-axis mode arrays broadcast to the coefficient shape."""
        m = self.axis_modes()
        if self.dim == 1:
            return (m,)
        return (m[:, None], m[None, :])

    def ksq(self) -> np.ndarray:
        if self.dim == 1:
            return self.axis_modes().astype(float) ** 2
        k1, k2 = self.mode_arrays()
        return (k1.astype(float) ** 2 + k2.astype(float) ** 2)

    def abs_k(self) -> np.ndarray:
        return np.sqrt(self.ksq())

    def grid_points(self, oversample: int | None = None) -> int:
        """FFT-friendly grid size per axis resolving q*(2n+1) points."""
        q = self.oversample if oversample is None else oversample
        return next_fast_len(max(q * self.modes_per_axis, self.modes_per_axis))

    def zero_index(self) -> tuple:
        return (self.n,) * self.dim


@dataclass
class FourierField:
    """A periodic field given by coefficients on a Lattice.

    reality=True marks a real-valued field (c_{-k} = conj(c_k));
    zero_mode=False marks the mean-zero convention (c_0 identically 0).
    """

    lattice: Lattice
    coef: np.ndarray
    reality: bool = False
    zero_mode: bool = True

    def __post_init__(self):
        self.coef = np.asarray(self.coef, dtype=np.complex128)
        if self.coef.shape != self.lattice.shape:
            raise ValueError(
                f"coefficient shape {self.coef.shape} does not match lattice {self.lattice.shape}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, lattice: Lattice, reality: bool = False, zero_mode: bool = True):
        return cls(lattice, np.zeros(lattice.shape, dtype=np.complex128), reality, zero_mode)

    @classmethod
    def from_modes(cls, lattice: Lattice, entries: dict, reality: bool = False,
                   zero_mode: bool = True):
        """Field with the given {k: coefficient} entries, k an int or tuple."""
        f = cls.zeros(lattice, reality, zero_mode)
        n = lattice.n
        for k, v in entries.items():
            if lattice.dim == 1:
                f.coef[int(k) + n] = v
            else:
                k1, k2 = k
                f.coef[k1 + n, k2 + n] = v
        if reality:
            f.coef = hermitianize(f.coef)
        return f

    # -- algebra ------------------------------------------------------------

    def copy(self) -> "FourierField":
        return FourierField(self.lattice, self.coef.copy(), self.reality, self.zero_mode)

    def __add__(self, other: "FourierField") -> "FourierField":
        _check_compatible(self, other)
        return FourierField(self.lattice, self.coef + other.coef,
                            self.reality and other.reality,
                            self.zero_mode or other.zero_mode)

    def __sub__(self, other: "FourierField") -> "FourierField":
        _check_compatible(self, other)
        return FourierField(self.lattice, self.coef - other.coef,
                            self.reality and other.reality,
                            self.zero_mode or other.zero_mode)

    def __mul__(self, a) -> "FourierField":
        a = complex(a)
        return FourierField(self.lattice, self.coef * a,
                            self.reality and a.imag == 0.0, self.zero_mode)

    __rmul__ = __mul__

    def mass(self) -> float:
        """L^2 mass  int |u|^2 dtheta/(2 pi)^D = sum_k |c_k|^2."""
        return float(np.sum(np.abs(self.coef) ** 2))

    def zero_coef(self) -> complex:
        return complex(self.coef[self.lattice.zero_index()])

    def check(self, tol: float = 1e-14) -> None:
        """Validate the reality / zero-mode invariants."""
        if self.reality:
            err = np.max(np.abs(self.coef - hermitianize(self.coef)))
            scale = max(1.0, float(np.max(np.abs(self.coef))))
            if err > tol * scale:
                raise ValueError(f"reality flag set but Hermitian symmetry violated by {err:.3e}")
        if not self.zero_mode and self.zero_coef() != 0:
            raise ValueError("zero_mode unset but c_0 != 0")


@dataclass
class GridBuffer:
    """Real-space samples of a field on the oversampled uniform tensor grid."""

    values: np.ndarray
    lattice: Lattice
    grid_size: int


def _check_compatible(f: FourierField, g: FourierField) -> None:
    if f.lattice != g.lattice:
        raise ValueError("fields live on incompatible lattices")


def hermitianize(coef: np.ndarray) -> np.ndarray:
    """Project onto Hermitian-symmetric arrays: c_{-k} = conj(c_k)."""
    if coef.ndim == 1:
        flipped = coef[::-1]
    else:
        flipped = coef[::-1, ::-1]
    return 0.5 * (coef + np.conj(flipped))


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------

def _embed(coef: np.ndarray, n: int, m: int, dim: int) -> np.ndarray:
    """Place centered coefficients into an FFT buffer of size m per axis."""
    if m < 2 * n + 1:
        raise GridResolutionError(
            f"grid of {m} points per axis cannot hold modes up to |k| = {n}")
    modes = np.arange(-n, n + 1) % m
    if dim == 1:
        buf = np.zeros(coef.shape[:-1] + (m,), dtype=np.complex128)
        buf[..., modes] = coef
    else:
        buf = np.zeros(coef.shape[:-2] + (m, m), dtype=np.complex128)
        buf[..., modes[:, None], modes[None, :]] = coef
    return buf


def synthesize_batch(coefs: np.ndarray, lattice: Lattice, oversample: int | None = None) -> np.ndarray:
    """Grid values for a batch of coefficient arrays (leading batch axes allowed)."""
    m = lattice.grid_points(oversample)
    buf = _embed(coefs, lattice.n, m, lattice.dim)
    if lattice.dim == 1:
        return np.fft.ifft(buf, axis=-1) * m
    return np.fft.ifft2(buf, axes=(-2, -1)) * (m * m)


def analyze_batch(values: np.ndarray, lattice: Lattice) -> np.ndarray:
    """Centered coefficients from grid values (inverse of synthesize_batch)."""
    m = values.shape[-1]
    if m < lattice.modes_per_axis:
        raise GridResolutionError(
            f"grid of {m} points per axis cannot resolve modes up to |k| = {lattice.n}")
    if lattice.dim == 1:
        buf = np.fft.fft(values, axis=-1) / m
    else:
        buf = np.fft.fft2(values, axes=(-2, -1)) / (m * m)
    modes = np.arange(-lattice.n, lattice.n + 1) % m
    if lattice.dim == 1:
        return buf[..., modes]
    return buf[..., modes[:, None], modes[None, :]]


def synthesize(fld: FourierField, oversample: int | None = None) -> GridBuffer:
    lat = fld.lattice
    vals = synthesize_batch(fld.coef, lat, oversample)
    return GridBuffer(vals, lat, vals.shape[-1])


def analyze(grid: GridBuffer, lattice: Lattice | None = None, reality: bool = False,
            zero_mode: bool = True) -> FourierField:
    lat = lattice if lattice is not None else grid.lattice
    coef = analyze_batch(grid.values, lat)
    return FourierField(lat, coef, reality, zero_mode)


def transform(obj, direction: str, lattice: Lattice):
    """Spec-level entry point: direction in {"to_grid", "to_coeffs"}."""
    if direction == "to_grid":
        if not isinstance(obj, FourierField):
            raise TypeError("to_grid expects a FourierField")
        return synthesize(obj)
    if direction == "to_coeffs":
        if not isinstance(obj, GridBuffer):
            raise TypeError("to_coeffs expects a GridBuffer")
        return analyze(obj, lattice)
    raise ValueError(f"unknown direction {direction!r}")


# ---------------------------------------------------------------------------
# projections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectionSpec:
    """Dirichlet P_m, dyadic block Delta(J), or de la Vallee Poussin K_J."""

    kind: str                      # "dirichlet" | "dyadic_block" | "vallee_poussin"
    m: int | None = None           # dirichlet cutoff
    J: tuple | None = None         # per-axis dyadic indices

    @classmethod
    def dirichlet(cls, m: int):
        return cls("dirichlet", m=m)

    @classmethod
    def dyadic_block(cls, *J: int):
        return cls("dyadic_block", J=tuple(J))

    @classmethod
    def vallee_poussin(cls, *J: int):
        return cls("vallee_poussin", J=tuple(J))


def dyadic_interval(j: int) -> np.ndarray:
    """Delta_j = {2^{j-1}, ..., 2^j - 1}; Delta_0 = {0}; mirrored for j < 0."""
    if j == 0:
        return np.array([0])
    if j > 0:
        return np.arange(2 ** (j - 1), 2 ** j)
    return -dyadic_interval(-j)[::-1]


def _axis_block_mask(j: int, modes: np.ndarray) -> np.ndarray:
    block = dyadic_interval(j)
    return (modes >= block.min()) & (modes <= block.max())


def _axis_vp_multiplier(j: int, modes: np.ndarray) -> np.ndarray:
    """Trapezoid multiplier: 1 on Delta_j, 0 outside the triple block,
    linear on the flanking blocks."""
    if j < 0:
        return _axis_vp_multiplier(-j, -modes)
    inner = dyadic_interval(j)
    lo, hi = int(inner.min()), int(inner.max())
    left_zero = int(dyadic_interval(j - 1).min()) - 1
    right_zero = int(dyadic_interval(j + 1).max()) + 1
    x = modes.astype(float)
    mult = np.zeros_like(x)
    plateau = (x >= lo) & (x <= hi)
    mult[plateau] = 1.0
    lramp = (x > left_zero) & (x < lo)
    mult[lramp] = (x[lramp] - left_zero) / (lo - left_zero)
    rramp = (x > hi) & (x < right_zero)
    mult[rramp] = (right_zero - x[rramp]) / (right_zero - hi)
    return mult


def projection_multiplier(spec: ProjectionSpec, lattice: Lattice) -> np.ndarray:
    modes = lattice.axis_modes()
    if spec.kind == "dirichlet":
        axis = (np.abs(modes) <= spec.m).astype(float)
        per_axis = [axis] * lattice.dim
    elif spec.kind == "dyadic_block":
        per_axis = [_axis_block_mask(j, modes).astype(float) for j in spec.J]
    elif spec.kind == "vallee_poussin":
        per_axis = [_axis_vp_multiplier(j, modes) for j in spec.J]
    else:
        raise ValueError(f"unknown projection kind {spec.kind!r}")
    if lattice.dim == 1:
        return per_axis[0]
    return per_axis[0][:, None] * per_axis[1][None, :]


def project(fld: FourierField, spec: ProjectionSpec) -> FourierField:
    mult = projection_multiplier(spec, fld.lattice)
    return FourierField(fld.lattice, fld.coef * mult, fld.reality, fld.zero_mode)


# ---------------------------------------------------------------------------
# norms and integrals
# ---------------------------------------------------------------------------

def sobolev_weights(lattice: Lattice, s: float, homogeneous: bool = False) -> np.ndarray:
    """|k|^{2s} with the zero mode weighted 1 (inhomogeneous convention) or 0
    (homogeneous), broadcast over the coefficient shape."""
    ksq = lattice.ksq()
    w = np.ones_like(ksq)
    nz = ksq > 0
    w[nz] = ksq[nz] ** s
    w[~nz] = 0.0 if homogeneous else 1.0
    return w


def sobolev_norm(fld: FourierField, s: float, homogeneous: bool = False) -> float:
    """H^s norm (|c_0|^2 + sum_{k!=0} |k|^{2s} |c_k|^2)^{1/2}; s = 0 is the
    coefficient l^2 norm, homogeneous=True drops the zero mode (Hdot^s)."""
    w = sobolev_weights(fld.lattice, s, homogeneous)
    return float(np.sqrt(np.sum(w * np.abs(fld.coef) ** 2)))


def lp_integral(fld: FourierField, p: int) -> float:
    """int_{T^D} |u|^p dtheta/(2 pi)^D, exact for lattice-supported fields.

    Even p: |u|^p = (u conj u)^{p/2} is a trigonometric polynomial; the grid
    is zero-padded to at least ceil(p/2)*(2n+1) points so the quadrature is
    exact.  Odd p: only the signed integral int u^p of a real field (the
    KdV cubic term) is a trigonometric polynomial, so odd p requires
    reality and returns the signed integral, exactly; |u|^p would not be
    exactly integrable by any finite quadrature.
    """
    p = int(p)
    if p < 1:
        raise ValueError("p must be a positive integer")
    q = max(fld.lattice.oversample, math.ceil(p / 2))
    vals = synthesize_batch(fld.coef, fld.lattice, q)
    if p % 2 == 0:
        return float(np.mean(np.abs(vals) ** p))
    if not fld.reality:
        raise ValueError("odd p is only defined (as the signed integral) for real fields")
    return float(np.mean(np.real(vals) ** p))


def convolve(f: FourierField, g: FourierField) -> FourierField:
    """(f * g)(theta) = int f(theta - phi) g(phi) dphi/(2 pi)^D; in
    coefficients, (f*g)^(m) = fhat(m) ghat(m)."""
    _check_compatible(f, g)
    return FourierField(f.lattice, f.coef * g.coef, f.reality and g.reality,
                        f.zero_mode and g.zero_mode)


def shift_slices(lattice: Lattice, m: tuple):
    """Slices such that coef[dst] runs over chat(j+m) while coef[src] runs
    over chat(j), for all j with j and j+m both in the lattice."""
    src, dst = [], []
    size = lattice.modes_per_axis
    for mm in m:
        if mm >= 0:
            src.append(slice(0, size - mm))
            dst.append(slice(mm, size))
        else:
            src.append(slice(-mm, size))
            dst.append(slice(0, size + mm))
    return tuple(src), tuple(dst)


def intensity_mode(coefs: np.ndarray, lattice: Lattice, m: tuple) -> np.ndarray:
    """(|u|^2)^hat(m) restricted to the lattice, batched over leading axes:
    sum_j chat(j+m) conj(chat(j)) over j with j, j+m in the lattice."""
    sl_src, sl_dst = shift_slices(lattice, m)
    prod = coefs[(slice(None),) + sl_dst] * np.conj(coefs[(slice(None),) + sl_src])
    return prod.sum(axis=tuple(range(1, prod.ndim)))


# ---------------------------------------------------------------------------
# real canonical coordinates
# ---------------------------------------------------------------------------
#
# Complex fields: coordinates are (Re c_k, Im c_k) over the whole lattice,
# which are orthonormal for the L^2 norm.  Real 1D fields u = sum_{j>=1}
# a_j cos j th + b_j sin j th use x_j = a_j/sqrt2, y_j = b_j/sqrt2 (plus the
# real zero mode when carried), again orthonormal.  Mean-zero fields simply
# omit the zero-mode coordinates.

def coordinate_count(lattice: Lattice, reality: bool, zero_mode: bool) -> int:
    if reality:
        if lattice.dim != 1:
            raise ValueError("real coordinate layout implemented for D = 1 only")
        return 2 * lattice.n + (1 if zero_mode else 0)
    size = lattice.modes_per_axis ** lattice.dim
    return 2 * (size if zero_mode else size - 1)


def field_coords(fld: FourierField) -> np.ndarray:
    return coords_from_coef(fld.coef[None, ...], fld.lattice, fld.reality, fld.zero_mode)[0]


def coords_from_coef(coefs: np.ndarray, lattice: Lattice, reality: bool,
                     zero_mode: bool) -> np.ndarray:
    """Batch version: (B, ...) coefficient stack -> (B, ncoords) real matrix."""
    b = coefs.shape[0]
    if reality:
        n = lattice.n
        cj = coefs[:, n + 1:]                      # modes j = 1..n
        a = 2.0 * np.real(cj)
        bb = -2.0 * np.imag(cj)
        cols = [a / np.sqrt(2.0), bb / np.sqrt(2.0)]
        if zero_mode:
            cols.append(np.real(coefs[:, n:n + 1]))
        return np.concatenate(cols, axis=1)
    flat = coefs.reshape(b, -1)
    if not zero_mode:
        z = np.ravel_multi_index(lattice.zero_index(), lattice.shape)
        keep = np.ones(flat.shape[1], dtype=bool)
        keep[z] = False
        flat = flat[:, keep]
    return np.concatenate([np.real(flat), np.imag(flat)], axis=1)


def coef_from_coords(coords: np.ndarray, lattice: Lattice, reality: bool,
                     zero_mode: bool) -> np.ndarray:
    coords = np.atleast_2d(coords)
    b = coords.shape[0]
    if reality:
        n = lattice.n
        x = coords[:, :n]
        y = coords[:, n:2 * n]
        a = np.sqrt(2.0) * x
        bb = np.sqrt(2.0) * y
        coefs = np.zeros((b, 2 * n + 1), dtype=np.complex128)
        coefs[:, n + 1:] = 0.5 * (a - 1j * bb)
        coefs[:, :n] = np.conj(coefs[:, n + 1:][:, ::-1])
        if zero_mode:
            coefs[:, n] = coords[:, 2 * n]
        return coefs
    size = lattice.modes_per_axis ** lattice.dim
    eff = size if zero_mode else size - 1
    flat = coords[:, :eff] + 1j * coords[:, eff:2 * eff]
    if not zero_mode:
        z = np.ravel_multi_index(lattice.zero_index(), lattice.shape)
        full = np.zeros((b, size), dtype=np.complex128)
        keep = np.ones(size, dtype=bool)
        keep[z] = False
        full[:, keep] = flat
        flat = full
    return flat.reshape((b,) + lattice.shape)


def field_from_coords(coords: np.ndarray, lattice: Lattice, reality: bool = False,
                      zero_mode: bool = True) -> FourierField:
    coef = coef_from_coords(np.atleast_2d(coords), lattice, reality, zero_mode)[0]
    return FourierField(lattice, coef, reality, zero_mode)


def dual_weights(lattice: Lattice, s_dual: float, reality: bool, zero_mode: bool) -> np.ndarray:
    """Per-coordinate weights |k|^{-2 s_dual} (zero mode weighted 1) matching
    the field_coords layout; the dual H^{-s} norm of a coordinate gradient g
    is (sum_i w_i g_i^2)^{1/2}."""
    if reality:
        j = np.arange(1, lattice.n + 1, dtype=float)
        w = j ** (-2.0 * s_dual)
        parts = [w, w]
        if zero_mode:
            parts.append(np.array([1.0]))
        return np.concatenate(parts)
    ksq = lattice.ksq().reshape(-1)
    w = np.ones_like(ksq)
    nz = ksq > 0
    w[nz] = ksq[nz] ** (-s_dual)
    if not zero_mode:
        z = np.ravel_multi_index(lattice.zero_index(), lattice.shape)
        keep = np.ones(w.shape[0], dtype=bool)
        keep[z] = False
        w = w[keep]
    return np.concatenate([w, w])
