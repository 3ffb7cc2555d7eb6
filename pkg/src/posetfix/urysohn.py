"""Monotone iteration for discretized Urysohn integral equations.

The equation ``x(t) = g(t) + ∫ F(t, s, x(s)) dμ(s)`` is discretized on
quadrature nodes ``t_i`` with nonnegative weights ``w_j``:

    (J y)_i = g_i + Σ_j w_j F(t_i, s_j, y_j)

``F`` nondecreasing in its last argument makes ``J`` monotone in the
pointwise order. If ``J(0) ≥ 0`` then ``0 ⪯ J(0)`` and the sequence
``0, J(0), J(J(0)), ...`` is nondecreasing; it converges to a nonnegative
solution. ``J(0) ≤ 0`` gives the mirror image. The solver asserts this
monotone trajectory at every step with no tolerance.

Norms are discrete L²(μ): ``‖x‖ = sqrt(Σ w_i x_i²)``.
"""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .errors import CONDITIONS, DomainError, InvariantError

BRANCHES = ("nonnegative", "nonpositive")


@dataclass(frozen=True)
class Grid:
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 1 or nodes.shape != weights.shape or nodes.size == 0:
            raise ValueError("nodes and weights must be nonempty 1-D arrays of equal length")
        if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(weights))):
            raise ValueError("nodes and weights must be finite")
        if np.any(weights < 0):
            raise ValueError("quadrature weights must be nonnegative")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def uniform(cls, a: float, b: float, m: int) -> "Grid":
        """Composite trapezoid rule on ``m`` equispaced nodes of ``[a, b]``."""
        if m < 2 or not b > a:
            raise ValueError("uniform grid needs m >= 2 and b > a")
        nodes = np.linspace(a, b, m)
        w = np.full(m, (b - a) / (m - 1))
        w[0] = w[-1] = 0.5 * (b - a) / (m - 1)
        return cls(nodes, w)

    @property
    def m(self) -> int:
        return self.nodes.size

    @property
    def measure(self) -> float:
        return float(self.weights.sum())

    def norm(self, x) -> float:
        x = np.asarray(x, dtype=float)
        return float(np.sqrt(np.sum(self.weights * x * x)))

    def norm2d(self, h) -> float:
        h = np.asarray(h, dtype=float)
        return float(np.sqrt(np.sum(np.outer(self.weights, self.weights) * h * h)))


# --- kernel catalog -------------------------------------------------------
# shape functions k(t, s) >= 0

def _k_constant(T, S, params):
    return np.full(np.broadcast(T, S).shape, float(params.get("k0", 1.0)))


def _k_exp_abs(T, S, params):
    return np.exp(-np.abs(T - S) / float(params.get("ell", 1.0)))


def _k_product(T, S, params):
    return T * S


def _k_gaussian(T, S, params):
    sigma = float(params.get("sigma", 1.0))
    return np.exp(-0.5 * ((T - S) / sigma) ** 2)


SHAPES: dict[str, Callable] = {
    "constant": _k_constant,
    "exp_abs": _k_exp_abs,
    "product": _k_product,
    "gaussian": _k_gaussian,
}


def _f_linear(K, X, params):
    return float(params.get("lam", 1.0)) * K * X


def _f_saturating(K, X, params):
    a, b = float(params.get("a", 1.0)), float(params.get("b", 1.0))
    return a * K * np.tanh(b * X) / b


def _f_affine_positive(K, X, params):
    a, c = float(params.get("a", 1.0)), float(params.get("c", 0.0))
    return a * K * np.maximum(X, 0.0) + c


def _f_quadratic(K, X, params):
    return float(params.get("a", 1.0)) * K * X * X


# default bound data (h, M) with |F| <= h + M|x|, given max k
def _b_linear(kmax, params):
    return 0.0, abs(float(params.get("lam", 1.0))) * kmax


def _b_saturating(kmax, params):
    a, b = float(params.get("a", 1.0)), float(params.get("b", 1.0))
    return abs(a) * kmax / abs(b), 0.0


def _b_affine_positive(kmax, params):
    return abs(float(params.get("c", 0.0))), abs(float(params.get("a", 1.0))) * kmax


def _b_quadratic(kmax, params):
    return 0.0, abs(float(params.get("a", 1.0))) * kmax


KERNELS: dict[str, tuple[Callable, Callable]] = {
    "linear": (_f_linear, _b_linear),
    "saturating": (_f_saturating, _b_saturating),
    "affine_positive": (_f_affine_positive, _b_affine_positive),
    "quadratic": (_f_quadratic, _b_quadratic),
}


@dataclass
class KernelSpec:
    """Catalog kernel ``F(t, s, x)`` with its growth data ``h`` and ``M``.

    ``name`` picks the nonlinearity (``linear``: ``lam·k·x``; ``saturating``:
    ``a·k·tanh(b x)/b``; ``affine_positive``: ``a·k·max(x, 0) + c``;
    ``quadratic``: ``a·k·x²``, which is neither monotone nor linearly bounded
    and exists to exercise the hypothesis checks). ``params["shape"]`` picks
    ``k(t, s)`` from :data:`SHAPES`. ``h`` may be a scalar, an ``(m, m)``
    array of values ``h(t_i, s_j)``, or ``None`` for the catalog default;
    ``M=None`` likewise.
    """

    name: str
    params: dict = field(default_factory=dict)
    h: object = None
    M: float | None = None

    def __post_init__(self):
        if self.name not in KERNELS:
            raise ValueError(f"unknown kernel {self.name!r}; choose from {sorted(KERNELS)}")
        shape = self.params.get("shape", "constant")
        if shape not in SHAPES:
            raise ValueError(f"unknown kernel shape {shape!r}; choose from {sorted(SHAPES)}")

    @property
    def is_linear(self) -> bool:
        return self.name == "linear"

    def shape(self, grid: Grid) -> np.ndarray:
        T, S = np.meshgrid(grid.nodes, grid.nodes, indexing="ij")
        return SHAPES[self.params.get("shape", "constant")](T, S, self.params)

    def evaluate(self, grid: Grid, x) -> np.ndarray:
        """Matrix ``F(t_i, s_j, x_j)``; ``x`` indexes the second node."""
        K = self.shape(grid)
        X = np.broadcast_to(np.asarray(x, dtype=float), K.shape)
        return KERNELS[self.name][0](K, X, self.params)

    def evaluate_scalar(self, grid: Grid, x: float) -> np.ndarray:
        """Matrix ``F(t_i, s_j, x)`` for one scalar ``x``."""
        K = self.shape(grid)
        return KERNELS[self.name][0](K, np.full(K.shape, float(x)), self.params)

    def bound_data(self, grid: Grid) -> tuple[np.ndarray, float]:
        K = self.shape(grid)
        h0, m0 = KERNELS[self.name][1](float(np.max(np.abs(K))), self.params)
        h = h0 if self.h is None else self.h
        h = np.broadcast_to(np.asarray(h, dtype=float), K.shape)
        M = m0 if self.M is None else float(self.M)
        return h, M

    def linear_matrix(self, grid: Grid) -> np.ndarray:
        """``lam·k(t_i, s_j)`` for a linear kernel."""
        if not self.is_linear:
            raise ValueError(f"kernel {self.name!r} is not linear in x")
        return float(self.params.get("lam", 1.0)) * self.shape(grid)


@dataclass
class UrysohnProblem:
    grid: Grid
    g: np.ndarray
    kernel: KernelSpec
    tol: float = 1e-10
    max_iter: int = 10_000

    def __post_init__(self):
        g = np.asarray(self.g, dtype=float)
        if g.ndim == 0:
            g = np.full(self.grid.m, float(g))
        if g.shape != (self.grid.m,):
            raise ValueError(f"g must have {self.grid.m} values, got shape {g.shape}")
        if not np.all(np.isfinite(g)):
            raise ValueError("g must be finite")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        self.g = g


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float = 0.0
    witness: tuple | None = None

    @property
    def condition(self) -> str:
        return CONDITIONS[self.name]

    def to_dict(self) -> dict:
        return {
            "hypothesis": self.condition.removesuffix(" fails"),
            "passed": self.passed,
            "worst": self.worst,
            "witness": list(self.witness) if self.witness is not None else None,
        }


@dataclass
class SolveReport:
    branch: str
    iterations: int
    solution: np.ndarray
    residual: float
    trace: list
    hypothesis_checks: list
    ball_radius: float
    iterates: list | None = None

    def to_dict(self) -> dict:
        return {
            "branch": self.branch,
            "iterations": self.iterations,
            "residual": self.residual,
            "ball_radius": self.ball_radius,
            "hypothesis_checks": [c.to_dict() for c in self.hypothesis_checks],
            "solution": [float(v) for v in self.solution],
            "trace": self.trace,
        }


def apply_operator(prob: UrysohnProblem, y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.shape != (prob.grid.m,):
        raise ValueError(f"expected a vector of length {prob.grid.m}, got shape {y.shape}")
    if not np.all(np.isfinite(y)):
        raise ValueError("input vector must be finite")
    with np.errstate(over="ignore", invalid="ignore"):
        F = prob.kernel.evaluate(prob.grid, y)
        out = prob.g + np.sum(F * prob.grid.weights, axis=1)
    bad = np.flatnonzero(~np.isfinite(out))
    if bad.size:
        raise DomainError("finite", f"(Jy)_{int(bad[0])} = {out[bad[0]]}")
    return out


def residual(prob: UrysohnProblem, x) -> float:
    return prob.grid.norm(np.asarray(x, dtype=float) - apply_operator(prob, x))


def ball_radius(prob: UrysohnProblem) -> float:
    """Radius of a ball mapped into itself by ``J``.

    With ``μ = Σ w`` and ``s = max(1, μ)``:
    ``R = (‖g‖ + sqrt(s)·‖h‖) / (1 − 2·M·s)``.
    For ``μ ≤ 1`` this is ``(‖g‖ + ‖h‖)/(1 − 2M)``.
    """
    grid = prob.grid
    h, M = prob.kernel.bound_data(grid)
    if not 0 <= M < 0.5:
        raise DomainError("growth_constant", f"M = {M}")
    s = max(1.0, grid.measure)
    denom = 1.0 - 2.0 * M * s
    if denom <= 0:
        raise DomainError("growth_constant", f"1 - 2·M·max(1, μ(Ω)) = {denom} <= 0")
    return (grid.norm(prob.g) + np.sqrt(s) * grid.norm2d(h)) / denom


def default_samples(radius: float, levels: int = 12) -> np.ndarray:
    """``{0} ∪ {±R·2^-i : i = 0..levels}``, sorted."""
    if radius <= 0:
        return np.zeros(1)
    pos = radius * 2.0 ** -np.arange(levels + 1)
    return np.unique(np.concatenate([-pos, [0.0], pos]))


def _samples_for(prob, samples):
    if samples is not None:
        return np.unique(np.asarray(samples, dtype=float))
    return default_samples(ball_radius(prob))


def check_growth_bound(prob: UrysohnProblem, samples: Sequence[float] | None = None) -> CheckResult:
    """Check ``|F(t_i, s_j, x)| <= h(t_i, s_j) + M|x|`` over the sample ladder.

    ``worst`` is the largest excess ``|F| - h - M|x|`` (nonpositive on pass).
    """
    h, M = prob.kernel.bound_data(prob.grid)
    xs = _samples_for(prob, samples)
    worst, witness = -np.inf, None
    for x in xs:
        excess = np.abs(prob.kernel.evaluate_scalar(prob.grid, x)) - (h + M * abs(x))
        i, j = np.unravel_index(np.argmax(excess), excess.shape)
        if excess[i, j] > worst:
            worst = float(excess[i, j])
            witness = (float(prob.grid.nodes[i]), float(prob.grid.nodes[j]), float(x))
    return CheckResult("growth_bound", worst <= 0, worst, witness)


def check_kernel_monotone(prob: UrysohnProblem, samples: Sequence[float] | None = None) -> CheckResult:
    """Check ``F(t_i, s_j, x) <= F(t_i, s_j, x')`` for adjacent samples ``x < x'``.

    ``worst`` is the largest drop ``F(x) - F(x')``; the witness names
    ``(t, s, x)`` where it occurs.
    """
    xs = _samples_for(prob, samples)
    worst, witness = 0.0, None
    prev = prob.kernel.evaluate_scalar(prob.grid, xs[0])
    for x0, x1 in zip(xs[:-1], xs[1:]):
        cur = prob.kernel.evaluate_scalar(prob.grid, x1)
        drop = prev - cur
        i, j = np.unravel_index(np.argmax(drop), drop.shape)
        if drop[i, j] > worst:
            worst = float(drop[i, j])
            witness = (float(prob.grid.nodes[i]), float(prob.grid.nodes[j]), float(x0))
        prev = cur
    return CheckResult("kernel_monotone", worst <= 0, worst, witness)


def sign_condition(prob: UrysohnProblem) -> dict[str, bool]:
    j0 = apply_operator(prob, np.zeros(prob.grid.m))
    return {"nonnegative": bool(np.all(j0 >= 0)), "nonpositive": bool(np.all(j0 <= 0))}


def check_hypotheses(prob: UrysohnProblem, samples=None) -> list[CheckResult]:
    """Growth constant, growth bound and kernel monotonicity, in that order."""
    _, M = prob.kernel.bound_data(prob.grid)
    out = [CheckResult("growth_constant", 0 <= M < 0.5, M)]
    try:
        radius = ball_radius(prob)
    except DomainError:
        out[0].passed = False
        return out
    xs = default_samples(radius) if samples is None else samples
    out.append(check_growth_bound(prob, xs))
    out.append(check_kernel_monotone(prob, xs))
    return out


def solve_branch(
    prob: UrysohnProblem,
    branch: str,
    samples: Sequence[float] | None = None,
    keep_iterates: bool = False,
) -> SolveReport:
    """Monotone iteration ``x_0 = 0``, ``x_{k+1} = J(x_k)`` on one sign branch.

    Raises :class:`DomainError` when a hypothesis fails, the branch is not
    granted by the sign of ``J(0)``, the ball guard trips, or ``max_iter`` is
    reached; :class:`InvariantError` when the trajectory stops being monotone.
    """
    if branch not in BRANCHES:
        raise ValueError(f"branch must be one of {BRANCHES}, got {branch!r}")
    checks = check_hypotheses(prob, samples)
    for c in checks:
        if not c.passed:
            raise DomainError(c.name, _describe(c))
    if not sign_condition(prob)[branch]:
        raise DomainError("sign_" + branch)
    radius = ball_radius(prob)
    norm = prob.grid.norm
    x = np.zeros(prob.grid.m)
    iterates = [x] if keep_iterates else None
    trace = []
    for k in range(1, prob.max_iter + 1):
        y = apply_operator(prob, x)
        diff = y - x if branch == "nonnegative" else x - y
        if np.any(diff < 0):
            i = int(np.flatnonzero(diff < 0)[0])
            raise InvariantError(f"{CONDITIONS['trajectory']} at iteration {k}, component {i}")
        ny = norm(y)
        if ny > radius:
            raise DomainError("ball", f"‖x_{k}‖ = {ny} > R = {radius}")
        step = norm(y - x)
        trace.append({"iteration": k, "norm": ny, "step": step})
        x = y
        if keep_iterates:
            iterates.append(x)
        if step <= prob.tol:
            res = residual(prob, x)
            sign_ok = np.all(x >= 0) if branch == "nonnegative" else np.all(x <= 0)
            if not sign_ok:
                raise InvariantError(f"solution violates the {branch} sign")
            return SolveReport(branch, k, x, res, trace, checks, radius, iterates)
    raise DomainError("convergence", f"step {trace[-1]['step']} > tol {prob.tol} after {prob.max_iter} iterations")


def _describe(c: CheckResult) -> str:
    if c.witness is None:
        return f"worst = {c.worst}"
    t, s, x = c.witness
    return f"worst = {c.worst} at t={t}, s={s}, x={x}"


def linear_oracle(prob: UrysohnProblem) -> np.ndarray:
    """Direct solve of ``(I - K W) x = g`` for a kernel linear in ``x``."""
    K = prob.kernel.linear_matrix(prob.grid)
    A = np.eye(prob.grid.m) - K * prob.grid.weights
    try:
        return np.linalg.solve(A, prob.g)
    except np.linalg.LinAlgError as exc:
        raise ValueError("linear system is singular") from exc


# --- JSON config ------------------------------------------------------------

def _grid_from(d: Mapping) -> Grid:
    kind = d.get("kind")
    if kind == "uniform":
        return Grid.uniform(float(d["a"]), float(d["b"]), int(d["m"]))
    if kind == "atoms":
        return Grid(d["nodes"], d["weights"])
    raise ValueError(f"unknown grid kind {kind!r}")


def _g_from(d: Mapping, grid: Grid) -> np.ndarray:
    kind = d.get("kind")
    if kind == "constant":
        return np.full(grid.m, float(d["value"]))
    if kind == "samples":
        return np.asarray(d["values"], dtype=float)
    raise ValueError(f"unknown g kind {kind!r}")


def _h_from(d, grid: Grid):
    if d is None:
        return None
    if isinstance(d, (int, float)):
        return float(d)
    kind = d.get("kind")
    if kind == "constant":
        return float(d["value"])
    if kind == "samples":
        h = np.asarray(d["values"], dtype=float)
        if h.shape != (grid.m, grid.m):
            raise ValueError(f"h samples must have shape ({grid.m}, {grid.m})")
        return h
    raise ValueError(f"unknown h kind {kind!r}")


def problem_from_dict(cfg: Mapping) -> tuple[UrysohnProblem, str]:
    """Build a problem and its requested branch from a config document.

    Raises ``KeyError``/``ValueError``/``TypeError`` on malformed input.
    """
    grid = _grid_from(cfg["grid"])
    g = _g_from(cfg["g"], grid)
    kd = cfg["kernel"]
    h = _h_from(kd.get("h"), grid)
    if isinstance(h, float) and h < 0 or isinstance(h, np.ndarray) and np.any(h < 0):
        raise ValueError("h must be nonnegative")
    kernel = KernelSpec(kd["name"], dict(kd.get("params", {})), h, kd.get("M"))
    prob = UrysohnProblem(grid, g, kernel, float(cfg.get("tol", 1e-10)), int(cfg.get("max_iter", 10_000)))
    branch = cfg.get("branch", "nonnegative")
    if branch not in BRANCHES:
        raise ValueError(f"branch must be one of {BRANCHES}")
    return prob, branch


def load_problem(path: str | Path) -> tuple[UrysohnProblem, str]:
    with open(path) as fh:
        return problem_from_dict(json.load(fh))


def write_csv(report: SolveReport, grid: Grid, prefix: str | Path) -> list[Path]:
    """Write ``<prefix>_solution.csv`` (t, x) and ``<prefix>_trace.csv``."""
    prefix = Path(prefix)
    sol = prefix.with_name(prefix.name + "_solution.csv")
    tr = prefix.with_name(prefix.name + "_trace.csv")
    with open(sol, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "x"])
        for t, x in zip(grid.nodes, report.solution):
            w.writerow([repr(float(t)), repr(float(x))])
    with open(tr, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iteration", "norm", "step"])
        for row in report.trace:
            w.writerow([row["iteration"], repr(row["norm"]), repr(row["step"])])
    return [sol, tr]
