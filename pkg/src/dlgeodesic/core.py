"""Domain types and grid arithmetic shared by the rest of the package."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

UNIFORM_RTOL = 1e-12


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class InvalidRangeError(DomainError):
    pass


class InvalidSizeError(DomainError):
    pass


class InvalidOrderError(DomainError):
    """Times or node indices given in the wrong order."""


class GridAlignmentError(DomainError):
    """A required time does not fall on a grid node."""


class NonuniformGridError(DomainError):
    pass


class InfeasibleInstanceError(DomainError):
    pass


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class TimeGrid:
    t_start: float
    t_end: float
    nodes: np.ndarray

    def __post_init__(self):
        nodes = _frozen(self.nodes)
        object.__setattr__(self, "nodes", nodes)
        if nodes.ndim != 1 or nodes.size < 3:
            raise InvalidSizeError("a grid needs at least 2 cells")
        if np.any(np.diff(nodes) <= 0):
            raise InvalidOrderError("grid nodes must be strictly increasing")
        if nodes[0] != self.t_start or nodes[-1] != self.t_end:
            raise InvalidRangeError("first and last nodes must equal t_start and t_end")
        widths = np.diff(nodes)
        h = (self.t_end - self.t_start) / widths.size
        if np.max(np.abs(widths - h)) > UNIFORM_RTOL * max(abs(self.t_end), abs(self.t_start), h) * 4:
            raise NonuniformGridError("only uniform grids are supported")

    @property
    def N(self) -> int:
        return self.nodes.size - 1

    @property
    def dt(self) -> float:
        return (self.t_end - self.t_start) / self.N

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.nodes)

    @property
    def midpoints(self) -> np.ndarray:
        return 0.5 * (self.nodes[:-1] + self.nodes[1:])

    def node_index(self, t: float, atol: float = 1e-9) -> int:
        """Index of the node at time ``t``; GridAlignmentError if there is none."""
        k = int(round((t - self.t_start) / self.dt))
        if k < 0 or k > self.N or abs(self.nodes[k] - t) > atol:
            raise GridAlignmentError(f"t={t!r} is not a node of the grid")
        return k


def make_uniform_grid(t_start: float, t_end: float, N: int) -> TimeGrid:
    if not t_start < t_end:
        raise InvalidRangeError(f"need t_start < t_end, got {t_start!r} >= {t_end!r}")
    if int(N) != N or N < 2:
        raise InvalidSizeError(f"need N >= 2 cells, got {N!r}")
    N = int(N)
    nodes = t_start + (t_end - t_start) * np.arange(N + 1) / N
    nodes[-1] = t_end
    return TimeGrid(float(t_start), float(t_end), nodes)


@dataclass(frozen=True, eq=False)
class PathProfile:
    """A curve sampled at grid nodes with a density that is constant on cells."""

    grid: TimeGrid
    F: np.ndarray
    rho: np.ndarray

    def __post_init__(self):
        F = _frozen(self.F)
        rho = _frozen(self.rho)
        if F.shape != (self.grid.N + 1,):
            raise InvalidSizeError(f"F needs {self.grid.N + 1} node values, got {F.shape}")
        if rho.shape != (self.grid.N,):
            raise InvalidSizeError(f"rho needs {self.grid.N} cell values, got {rho.shape}")
        if not np.all(np.isfinite(F)):
            raise DomainError("F must be finite at every node")
        if not np.all(rho >= 0):
            raise DomainError("rho must be nonnegative on every cell")
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "rho", rho)

    @property
    def t(self) -> np.ndarray:
        return self.grid.nodes

    def with_rho(self, rho) -> PathProfile:
        return PathProfile(self.grid, self.F, rho)

    def with_F(self, F) -> PathProfile:
        return PathProfile(self.grid, F, self.rho)


def cell_slopes(profile: PathProfile) -> np.ndarray:
    return np.diff(profile.F) / np.diff(profile.grid.nodes)


@dataclass(frozen=True)
class RelaxedInstance:
    """Endpoints (t1, x1), (t2, x2) and the initial slack b of the relaxed problem."""

    t1: float
    x1: float
    t2: float
    x2: float
    b: float

    def __post_init__(self):
        if not 0 < self.t1 < self.t2:
            raise InvalidRangeError(f"need 0 < t1 < t2, got t1={self.t1!r}, t2={self.t2!r}")
        if self.b < 0:
            raise DomainError(f"slack b must be nonnegative, got {self.b!r}")

    @property
    def b_max(self) -> float:
        """Slack at which the straight chord needs no planted density at all."""
        return ((self.x2 - self.x1) ** 2 / (self.t2 - self.t1)
                + self.x1 ** 2 / self.t1 - self.x2 ** 2 / self.t2)

    @property
    def orientation(self) -> int:
        """+1 if x1/t1 > x2/t2, -1 if reversed, 0 on the degenerate ray."""
        return int(np.sign(self.x1 / self.t1 - self.x2 / self.t2))

    def mirrored(self) -> RelaxedInstance:
        """The same problem with space reflected, x -> -x."""
        return RelaxedInstance(self.t1, -self.x1, self.t2, -self.x2, self.b)

    def with_b(self, b: float) -> RelaxedInstance:
        return RelaxedInstance(self.t1, self.x1, self.t2, self.x2, b)


@dataclass(frozen=True, eq=False)
class SolutionReport:
    profile: PathProfile
    I2: float
    g_trace: np.ndarray
    t_B_est: float
    iterations: int
    kkt_residual: float
    converged: bool
    message: str = ""


@dataclass(frozen=True)
class VerificationReport:
    min_margin: float
    argmin_pair: tuple[float, float]
    violations: list[tuple[float, float, float]]
    passed: bool
    margin_tol: float
    n_violations: int = 0
    near_zero_unexplained: list[tuple[float, float, float]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "min_margin": self.min_margin,
            "argmin_pair": list(self.argmin_pair),
            "margin_tol": self.margin_tol,
            "n_violations": self.n_violations,
            "violations": [list(v) for v in self.violations],
            "near_zero_unexplained": [list(v) for v in self.near_zero_unexplained],
        }
