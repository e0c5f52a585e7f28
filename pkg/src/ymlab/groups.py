"""Structure-group numerics for U(1), SU(2) and SU(3).

Conventions used throughout the package:

* Algebra elements are anti-Hermitian traceless matrices (su(n)) or purely
  imaginary complex scalars (u(1)).
* The Ad-invariant inner product is ``inner(X, Y) = -Re tr(XY)``.  It is not
  normalized: the su(2) generators T_a = -(i/2) sigma_a have norm^2 = 1/2.
  Every reported energy uses this metric.
* U(1) group elements are stored as real link angles theta (the element is
  exp(i*theta)).  This keeps unitarity exact by construction and makes the
  snapshot angle format lossless.  SU(n) group elements are n x n complex
  matrices.
* All operations are vectorized: arrays may carry arbitrary leading batch
  axes in front of the element axes (none for U(1), (n, n) for SU(n)).

Everything here is a pure function of its inputs; nothing mutates shared
state, so the module is safe to use from any number of threads.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

__all__ = [
    "GroupKind",
    "Group",
    "U1",
    "SU2",
    "SU3",
    "commutator",
    "inner",
]

_PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)

_GELLMANN = np.array(
    [
        [[0, 1, 0], [1, 0, 0], [0, 0, 0]],
        [[0, -1j, 0], [1j, 0, 0], [0, 0, 0]],
        [[1, 0, 0], [0, -1, 0], [0, 0, 0]],
        [[0, 0, 1], [0, 0, 0], [1, 0, 0]],
        [[0, 0, -1j], [0, 0, 0], [1j, 0, 0]],
        [[0, 0, 0], [0, 0, 1], [0, 1, 0]],
        [[0, 0, 0], [0, 0, -1j], [0, 1j, 0]],
        [[1, 0, 0], [0, 1, 0], [0, 0, -2]] / np.sqrt(3),
    ],
    dtype=np.complex128,
)


class GroupKind(enum.Enum):
    U1 = "U1"
    SU2 = "SU2"
    SU3 = "SU3"


def _dag(m):
    return np.conj(np.swapaxes(m, -1, -2))


@dataclass(frozen=True)
class Group:
    """One of the compact structure groups, with batched element arithmetic."""

    kind: GroupKind

    @property
    def n(self) -> int:
        return {GroupKind.U1: 1, GroupKind.SU2: 2, GroupKind.SU3: 3}[self.kind]

    @property
    def name(self) -> str:
        return self.kind.value

    @property
    def is_abelian(self) -> bool:
        return self.kind is GroupKind.U1

    @property
    def elem_shape(self) -> tuple:
        """Trailing shape of a group-element array: () angles or (n, n)."""
        return () if self.is_abelian else (self.n, self.n)

    @property
    def alg_dim(self) -> int:
        return 1 if self.is_abelian else self.n * self.n - 1

    # -- group element arithmetic -------------------------------------------

    def identity(self, batch_shape=()) -> np.ndarray:
        if self.is_abelian:
            return np.zeros(batch_shape, dtype=np.float64)
        out = np.zeros(batch_shape + self.elem_shape, dtype=np.complex128)
        out[...] = np.eye(self.n)
        return out

    def mul(self, a, b):
        if self.is_abelian:
            return a + b
        return a @ b

    def dag(self, a):
        if self.is_abelian:
            return -a
        return _dag(a)

    def retrace(self, u):
        """Re tr(U) of the group element (cos(theta) for U(1))."""
        if self.is_abelian:
            return np.cos(u)
        return np.trace(u, axis1=-2, axis2=-1).real

    def embed(self, u):
        """Group element as a complex scalar/matrix, so that sums make sense."""
        if self.is_abelian:
            return np.exp(1j * u)
        return u

    def conj_by(self, u, x):
        """Adjoint action Ad(u) x = u x u^dag on algebra values."""
        if self.is_abelian:
            return x
        return u @ x @ _dag(u)

    def reunitarize(self, u):
        """Nearest unitary (polar factor), det-corrected to 1 for SU(n).

        For U(1) angles there is no drift; the angle is wrapped to [-pi, pi).
        Raises ValueError on (numerically) singular input.
        """
        if self.is_abelian:
            if not np.all(np.isfinite(u)):
                raise ValueError("non-finite U(1) link angle")
            return np.mod(u + np.pi, 2.0 * np.pi) - np.pi
        w, s, vh = np.linalg.svd(u)
        if np.min(s) < 1e-8:
            raise ValueError("singular matrix passed to reunitarize")
        p = w @ vh
        det = np.linalg.det(p)
        # divide out the n-th root of the residual phase
        p = p * np.exp(-1j * np.angle(det) / self.n)[..., None, None]
        return p

    def unitarity_defect(self, u) -> float:
        """max over the batch of ||U^dag U - I||_inf (0 for U(1) angles)."""
        if self.is_abelian:
            return 0.0
        d = _dag(u) @ u - np.eye(self.n)
        return float(np.max(np.abs(d)))

    # -- algebra arithmetic --------------------------------------------------

    def project_algebra(self, m):
        """Orthogonal projection of an ambient scalar/matrix onto the algebra.

        (M - M^dag)/2 minus the trace part for SU(n); i*Im(M) for u(1).
        Idempotent on algebra elements.
        """
        m = np.asarray(m, dtype=np.complex128)
        if self.is_abelian:
            return 1j * m.imag
        a = 0.5 * (m - _dag(m))
        tr = np.trace(a, axis1=-2, axis2=-1) / self.n
        return a - tr[..., None, None] * np.eye(self.n)

    def commutator(self, x, y):
        self._check_alg(x)
        self._check_alg(y)
        if self.is_abelian:
            return np.zeros_like(np.asarray(x) * np.asarray(y))
        return x @ y - y @ x

    def retrace_prod(self, x, y):
        """Re tr(XY), batched; used by inner() and the charge density."""
        if self.is_abelian:
            return (np.asarray(x) * np.asarray(y)).real
        return np.einsum("...ij,...ji->...", x, y).real

    def inner(self, x, y):
        """-Re tr(XY): symmetric, positive definite on the algebra."""
        self._check_alg(x)
        self._check_alg(y)
        return -self.retrace_prod(x, y)

    def norm2(self, x):
        return self.inner(x, x)

    def exp_map(self, x):
        """Group element exp(X) in the group's storage representation.

        U(1): the angle Im(X).  SU(2): closed form.  SU(3): scaling and
        squaring with a truncated Taylor series (error < 1e-13 for ||X|| <= 1,
        and far smaller for the small steps the flow takes).
        """
        self._check_alg(x)
        if self.is_abelian:
            return np.asarray(x, dtype=np.complex128).imag.copy()
        if self.kind is GroupKind.SU2:
            return _exp_su2(np.asarray(x, dtype=np.complex128))
        return _exp_taylor(np.asarray(x, dtype=np.complex128), self.n)

    def orthonormal_basis(self) -> np.ndarray:
        """Basis E_a with inner(E_a, E_b) = delta_ab, shape (alg_dim, *elem)."""
        if self.is_abelian:
            return np.array([1j])
        if self.kind is GroupKind.SU2:
            return -1j / np.sqrt(2.0) * _PAULI
        return 1j / np.sqrt(2.0) * _GELLMANN

    def random_algebra(self, seed_or_rng, batch_shape=(), amplitude: float = 1.0):
        """Algebra element(s) with i.i.d. uniform[-amplitude, amplitude]
        coordinates in the orthonormal basis; deterministic in the seed."""
        if amplitude < 0:
            raise ValueError("amplitude must be >= 0")
        rng = (
            seed_or_rng
            if isinstance(seed_or_rng, np.random.Generator)
            else np.random.default_rng(seed_or_rng)
        )
        coords = rng.uniform(-amplitude, amplitude, size=batch_shape + (self.alg_dim,))
        basis = self.orthonormal_basis()
        if self.is_abelian:
            return 1j * coords[..., 0]
        return np.einsum("...a,aij->...ij", coords, basis)

    def algebra_coords(self, x):
        """Coordinates of x in the orthonormal basis (inverse of the above)."""
        basis = self.orthonormal_basis()
        if self.is_abelian:
            return np.asarray(x, dtype=np.complex128).imag[..., None]
        return np.stack([self.inner(x, e) for e in basis], axis=-1)

    # -- checks ---------------------------------------------------------------

    def _check_alg(self, x):
        if self.is_abelian:
            return  # scalars carry no structure to validate
        x = np.asarray(x)
        if x.ndim < 2 or x.shape[-2:] != self.elem_shape:
            raise ValueError(
                f"expected trailing shape {self.elem_shape} for {self.name}, "
                f"got array of shape {x.shape}"
            )


def _exp_su2(x):
    # anti-hermitian traceless 2x2: x^2 = -omega^2 * I
    om2 = -np.einsum("...ij,...ji->...", x, x).real / 2.0
    om = np.sqrt(np.maximum(om2, 0.0))
    out = np.zeros_like(x)
    c = np.cos(om)
    out[..., 0, 0] = c
    out[..., 1, 1] = c
    return out + np.sinc(om / np.pi)[..., None, None] * x


def _exp_taylor(x, n, theta=0.25, terms=14):
    fro = np.sqrt(np.max(np.sum(np.abs(x) ** 2, axis=(-2, -1))))
    s = 0 if fro <= theta else int(np.ceil(np.log2(fro / theta)))
    y = x / (2.0**s)
    eye = np.eye(n)
    acc = np.zeros_like(y)
    acc[...] = eye
    for k in range(terms, 0, -1):
        acc = eye + (y @ acc) / k
    for _ in range(s):
        acc = acc @ acc
    return acc


U1 = Group(GroupKind.U1)
SU2 = Group(GroupKind.SU2)
SU3 = Group(GroupKind.SU3)

_BY_NAME = {"U1": U1, "SU2": SU2, "SU3": SU3}


def group_by_name(name: str) -> Group:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise ValueError(f"unknown group {name!r}; expected U1, SU2 or SU3") from None


def commutator(x, y):
    """[X, Y] = XY - YX for matrix algebra elements; 0 for commuting scalars."""
    x, y = np.asarray(x), np.asarray(y)
    if x.shape[-2:] != y.shape[-2:]:
        raise ValueError("mismatched group kinds in commutator")
    if x.ndim < 2:
        return np.zeros_like(x * y)
    return x @ y - y @ x


def inner(x, y):
    """-Re tr(XY) for matrices, -Re(xy) for u(1) scalars."""
    x, y = np.asarray(x), np.asarray(y)
    if x.shape[-2:] != y.shape[-2:]:
        raise ValueError("mismatched group kinds in inner")
    if x.ndim < 2:
        return -(x * y).real
    return -np.einsum("...ij,...ji->...", x, y).real
