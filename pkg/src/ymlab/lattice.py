"""Periodic lattice geometry for T^3 and T^4.

Sites are addressed either by coordinate tuples (x_0, ..., x_{d-1}) or by a
linear index with x_0 fastest:  index = x_0 + L_0*(x_1 + L_1*(x_2 + ...)).
Directions are 0-based.  The lattice spacing is bookkeeping only; energies
are reported in lattice units.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Lattice:
    dims: tuple
    spacing: float = 1.0

    def __post_init__(self):
        dims = tuple(int(L) for L in self.dims)
        object.__setattr__(self, "dims", dims)
        if len(dims) not in (3, 4):
            raise ValueError(f"dimension must be 3 or 4, got {len(dims)}")
        if any(L < 1 for L in dims):
            raise ValueError(f"extents must be positive, got {dims}")
        if self.spacing <= 0:
            raise ValueError("lattice spacing must be positive")

    @property
    def d(self) -> int:
        return len(self.dims)

    @property
    def volume(self) -> int:
        return int(np.prod(self.dims))

    @property
    def n_links(self) -> int:
        return self.volume * self.d

    @property
    def planes(self) -> tuple:
        """Ordered (mu, nu) pairs with mu < nu."""
        d = self.d
        return tuple((i, j) for i in range(d) for j in range(i + 1, d))

    @property
    def n_plaquettes(self) -> int:
        return self.volume * len(self.planes)

    def check_direction(self, mu: int):
        if not 0 <= mu < self.d:
            raise ValueError(f"direction {mu} out of range for d={self.d}")

    def site_index(self, coords) -> int:
        """Linear index with x_0 fastest."""
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.d:
            raise ValueError("coordinate tuple has wrong length")
        idx = 0
        for L, c in zip(reversed(self.dims), reversed(coords)):
            if not 0 <= c < L:
                raise ValueError(f"coordinate {coords} out of range for {self.dims}")
            idx = idx * L + c
        return idx

    def site_coords(self, index: int) -> tuple:
        if not 0 <= index < self.volume:
            raise ValueError("site index out of range")
        out = []
        for L in self.dims:
            index, c = divmod(index, L)
            out.append(c)
        return tuple(out)

    def shift(self, coords, mu: int, s: int) -> tuple:
        """Coordinates of the site displaced by s (+1/-1) in direction mu."""
        self.check_direction(mu)
        coords = tuple(int(c) for c in coords)
        out = list(coords)
        out[mu] = (out[mu] + s) % self.dims[mu]
        return tuple(out)

    def plaquette_corners(self, coords, mu: int, nu: int) -> tuple:
        """The four corners x, x+mu, x+mu+nu, x+nu in traversal order."""
        if mu == nu:
            raise ValueError("plaquette plane needs two distinct directions")
        self.check_direction(mu)
        self.check_direction(nu)
        a = tuple(int(c) for c in coords)
        b = self.shift(a, mu, +1)
        c = self.shift(b, nu, +1)
        d = self.shift(a, nu, +1)
        return a, b, c, d

    def sites(self):
        """Iterate all coordinate tuples, x_0 fastest."""
        for idx in range(self.volume):
            yield self.site_coords(idx)
