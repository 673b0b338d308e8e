"""Walker states on the coin (x) position space.

Layout is coin-major: flat index ``coin * N + site`` where ``N`` is the
number of lattice sites.  A pure state is a complex vector of length
``2N``; a density matrix is ``2N x 2N``.  Both reshape cheaply to
``(2, N)`` and ``(2, N, 2, N)`` views, which is how the kernels consume
them.

Position *labels* (the ``x`` of the walk) are distinct from site
*indices*.  On a cycle the label is the index.  On a line the label is
``index - origin_index``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import RangeError, ShapeError, ValidationError

NORM_TOL = 1e-10


@dataclass(frozen=True)
class Line:
    """Finite segment of the integer line.

    The lattice is only a container: evolutions size it so the walker
    never touches either end.
    """

    length: int
    origin_index: int

    def __post_init__(self):
        if self.length < 1:
            raise ValidationError("line length must be >= 1", "length")
        if not 0 <= self.origin_index < self.length:
            raise ValidationError("origin_index must lie on the lattice", "origin_index")

    @classmethod
    def centered(cls, steps: int, start: int = 0) -> "Line":
        """Smallest lattice on which a ``steps``-step walk from ``start`` stays interior."""
        half = steps + abs(start) + 1
        return cls(length=2 * half + 1, origin_index=half)

    @property
    def sites(self) -> int:
        return self.length

    @property
    def cyclic(self) -> bool:
        return False


@dataclass(frozen=True)
class Cycle:
    """Ring of ``n`` sites with periodic boundary."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValidationError("cycle needs n >= 2", "n")

    @property
    def sites(self) -> int:
        return self.n

    @property
    def cyclic(self) -> bool:
        return True

    @property
    def half(self) -> int:
        """``s`` in ``n = 2s + 1``; one turn is ``s`` steps."""
        if self.n % 2 == 0:
            raise ValidationError("turns require odd n", "n")
        return (self.n - 1) // 2


Topology = Union[Line, Cycle]


def position_index(topology: Topology, x: int) -> int:
    """Map a position label to its site index."""
    if topology.cyclic:
        return ((x % topology.n) + topology.n) % topology.n
    idx = x + topology.origin_index
    if not 0 <= idx < topology.length:
        raise RangeError(f"position {x} lies outside the line lattice", "x")
    return idx


def position_label(topology: Topology, index: int) -> int:
    """Inverse of :func:`position_index` on valid site indices."""
    if not 0 <= index < topology.sites:
        raise RangeError(f"site index {index} out of range", "index")
    return index if topology.cyclic else index - topology.origin_index


def position_labels(topology: Topology) -> np.ndarray:
    idx = np.arange(topology.sites)
    return idx if topology.cyclic else idx - topology.origin_index


@dataclass(frozen=True)
class InitialStateParams:
    """``cos(theta0/2)|0> + sin(theta0/2) e^{i phi0} |1>`` at ``start_position``.

    Angles in degrees; ``start_position`` is a position label.
    """

    theta0: float = 90.0
    phi0: float = 0.0
    start_position: int = 0

    def __post_init__(self):
        if not 0.0 <= self.theta0 <= 180.0:
            raise ValidationError("theta0 must lie in [0, 180] degrees", "initial.theta0")
        if not 0.0 <= self.phi0 < 360.0:
            raise ValidationError("phi0 must lie in [0, 360) degrees", "initial.phi0")

    def coin_amplitudes(self) -> tuple[complex, complex]:
        half = np.deg2rad(self.theta0) / 2.0
        a = complex(np.cos(half))
        b = complex(np.sin(half) * np.exp(1j * np.deg2rad(self.phi0)))
        return a, b


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class PureState:
    topology: Topology
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes)
        if amps.shape != (2 * self.topology.sites,):
            raise ShapeError(
                f"expected {2 * self.topology.sites} amplitudes, got shape {amps.shape}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValidationError("amplitudes must be finite")
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @property
    def sites(self) -> int:
        return self.topology.sites

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def as_grid(self) -> np.ndarray:
        """Read-only ``(2, N)`` view: ``[coin, site]``."""
        return self.amplitudes.reshape(2, self.sites)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    topology: Topology
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = np.asarray(self.matrix)
        dim = 2 * self.topology.sites
        if mat.shape != (dim, dim):
            raise ShapeError(f"expected {dim}x{dim} density matrix, got {mat.shape}")
        object.__setattr__(self, "matrix", _frozen(mat))

    @property
    def sites(self) -> int:
        return self.topology.sites

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def hermiticity_error(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def as_blocks(self) -> np.ndarray:
        """Read-only ``(2, N, 2, N)`` view: ``[coin_row, site_row, coin_col, site_col]``."""
        n = self.sites
        return self.matrix.reshape(2, n, 2, n)


def make_initial_pure(params: InitialStateParams, topology: Topology) -> PureState:
    site = position_index(topology, params.start_position)
    a, b = params.coin_amplitudes()
    amps = np.zeros(2 * topology.sites, dtype=np.complex128)
    amps[site] = a
    amps[topology.sites + site] = b
    return PureState(topology, amps)


def pure_to_density(state: PureState) -> DensityMatrix:
    psi = state.amplitudes
    return DensityMatrix(state.topology, np.outer(psi, psi.conj()))
