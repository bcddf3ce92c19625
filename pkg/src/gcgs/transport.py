# -*- coding: utf-8 -*-
"""
Entropic and Laplacian regularized optimal transport.

The problem minimized over the transport polytope
{gamma >= 0, gamma 1 = mu_s, gamma^T 1 = mu_t} is

    F(gamma) = <gamma, C>_F + lambda_lap * Omega_lap(gamma)
               + lambda_ent * Omega_ent(gamma)

with Omega_ent the negentropy sum(gamma * log(gamma)) and Omega_lap a
quadratic graph-Laplacian term penalizing distortion of transported
sample positions. The split used by the solver linearizes the cost and
Laplacian parts; the resulting subproblem is entropic transport with an
adjusted cost and is solved by Sinkhorn-Knopp scaling. An exact
transportation-simplex linear minimizer supports the classic
conditional gradient baseline.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.special import logsumexp, xlogy

from .numerics import EvaluationError, as_matrix, make_rng
from .solver import SplitObjective, cg_adapter

# Output plans are floored here so entropy gradients stay finite.
_PLAN_FLOOR = 1e-300


class ConvergenceError(RuntimeError):
    """Sinkhorn hit its iteration cap; carries the achieved violation."""

    def __init__(self, violation: float, max_iter: int):
        super().__init__(
            f"sinkhorn did not converge in {max_iter} iterations "
            f"(marginal violation {violation:.3e})")
        self.violation = violation


class DegeneracyError(RuntimeError):
    """Transportation simplex exceeded its pivot budget."""


def as_histogram(weights) -> np.ndarray:
    """Validate and return a probability histogram as a float64 array."""
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 1:
        raise ValueError(f"histogram must be 1-D, got shape {w.shape}")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise ValueError("histogram weights must be finite and nonnegative")
    if abs(w.sum() - 1.0) > 1e-12:
        raise ValueError(f"histogram weights sum to {w.sum()!r}, expected 1")
    return w


def uniform_histogram(n: int) -> np.ndarray:
    return np.full(n, 1.0 / n)


def marginal_violation(gamma: np.ndarray, mu_s: np.ndarray, mu_t: np.ndarray) -> float:
    """Infinity-norm violation of the prescribed row/column sums."""
    row = np.max(np.abs(gamma.sum(axis=1) - mu_s))
    col = np.max(np.abs(gamma.sum(axis=0) - mu_t))
    return float(max(row, col))


def validate_plan(gamma: np.ndarray, mu_s, mu_t, tol: float = 1e-9) -> np.ndarray:
    """Check nonnegativity and marginals of a transport plan."""
    gamma = as_matrix(gamma)
    if np.any(gamma < 0):
        raise ValueError("transport plan has negative entries")
    viol = marginal_violation(gamma, np.asarray(mu_s), np.asarray(mu_t))
    if viol > tol:
        raise ValueError(f"transport plan violates marginals by {viol:.3e}")
    return gamma


# ---------------------------------------------------------------------------
# Regularizers and problem definition
# ---------------------------------------------------------------------------

def negentropy(gamma: np.ndarray) -> float:
    """sum(gamma * log(gamma)) with the convention 0 log 0 = 0."""
    return float(np.sum(xlogy(gamma, gamma)))


def negentropy_grad(gamma: np.ndarray) -> np.ndarray:
    """Elementwise 1 + log(gamma); defined only for positive plans."""
    if np.any(gamma <= 0):
        i, j = np.argwhere(gamma <= 0)[0]
        raise ValueError(
            f"negentropy gradient undefined at nonpositive entry ({i}, {j})")
    return 1.0 + np.log(gamma)


@dataclass
class TransportProblem:
    """Cost, marginals and regularization data for one transport instance.

    ``lambda_ent`` weights the negentropy term and must be positive;
    ``lambda_lap`` weights the Laplacian term and may be zero, in which
    case the graph fields may be omitted. ``lambda_s`` / ``lambda_t``
    are the inner weights of the two Laplacian traces.
    """

    cost: np.ndarray
    mu_s: np.ndarray
    mu_t: np.ndarray
    lambda_ent: float
    lambda_lap: float = 0.0
    lap_s: Optional[np.ndarray] = None
    lap_t: Optional[np.ndarray] = None
    Xs: Optional[np.ndarray] = None
    Xt: Optional[np.ndarray] = None
    lambda_s: float = 1.0
    lambda_t: float = 1.0

    def __post_init__(self):
        self.cost = as_matrix(self.cost)
        self.mu_s = as_histogram(self.mu_s)
        self.mu_t = as_histogram(self.mu_t)
        r, c = self.cost.shape
        if self.mu_s.shape != (r,) or self.mu_t.shape != (c,):
            raise ValueError("marginal lengths do not match the cost matrix")
        if self.lambda_ent <= 0:
            raise ValueError("lambda_ent must be positive")
        if self.lambda_lap < 0:
            raise ValueError("lambda_lap must be nonnegative")
        if self.lambda_lap > 0:
            checked = []
            for name, L, n in (("lap_s", self.lap_s, r), ("lap_t", self.lap_t, c)):
                if L is None:
                    raise ValueError(f"{name} required when lambda_lap > 0")
                L = as_matrix(L)
                if L.shape != (n, n):
                    raise ValueError(f"{name} must be {n}x{n}")
                if np.max(np.abs(L - L.T)) > 1e-8:
                    raise ValueError(f"{name} must be symmetric")
                if np.max(np.abs(L.sum(axis=1))) > 1e-8:
                    raise ValueError(f"{name} rows must sum to 0")
                checked.append(L)
            self.lap_s, self.lap_t = checked
            if self.Xs is None or self.Xt is None:
                raise ValueError("sample positions required when lambda_lap > 0")
            self.Xs = as_matrix(self.Xs)
            self.Xt = as_matrix(self.Xt)


def laplacian_reg(gamma: np.ndarray, problem: TransportProblem) -> float:
    """Value of the position-preserving Laplacian regularizer."""
    if problem.lambda_lap == 0.0 or problem.lap_s is None:
        return 0.0
    A = gamma @ problem.Xt
    term_s = problem.lambda_s * float(np.sum(A * (problem.lap_s @ A)))
    B = gamma.T @ problem.Xs
    term_t = problem.lambda_t * float(np.sum(B * (problem.lap_t @ B)))
    return term_s + term_t


def laplacian_reg_grad(gamma: np.ndarray, problem: TransportProblem) -> np.ndarray:
    """Gradient of :func:`laplacian_reg` with respect to the plan."""
    if problem.lambda_lap == 0.0 or problem.lap_s is None:
        return np.zeros_like(gamma)
    Ls, Lt = problem.lap_s, problem.lap_t
    Xs, Xt = problem.Xs, problem.Xt
    g_s = problem.lambda_s * (((Ls + Ls.T) @ gamma @ Xt) @ Xt.T)
    g_t = problem.lambda_t * (Xs @ (Xs.T @ (gamma @ (Lt + Lt.T))))
    return g_s + g_t


def ot_objective(gamma: np.ndarray, problem: TransportProblem) -> float:
    """Full objective: transport cost + weighted regularizers."""
    return (float(np.vdot(gamma, problem.cost))
            + problem.lambda_lap * laplacian_reg(gamma, problem)
            + problem.lambda_ent * negentropy(gamma))


def ot_split(problem: TransportProblem, sinkhorn_tol: float = 1e-9,
             sinkhorn_max_iter: int = 10000,
             warm_start: bool = False) -> SplitObjective:
    """Split objective whose partial oracle is Sinkhorn on the adjusted cost.

    The smooth part collects the linear cost and the Laplacian term; the
    entropy stays exact in the subproblem, which therefore reduces to
    entropic transport with cost ``C + lambda_lap * grad(Omega_lap)``.
    With ``warm_start`` the oracle reuses its previous scaling
    potentials; such an objective holds per-solve state and must not be
    shared across concurrent solves.
    """
    state = {"potentials": None}

    def f_eval(gamma):
        return (float(np.vdot(gamma, problem.cost))
                + problem.lambda_lap * laplacian_reg(gamma, problem))

    def f_grad(gamma):
        return problem.cost + problem.lambda_lap * laplacian_reg_grad(gamma, problem)

    def oracle(gamma, grad_f):
        plan, pots = sinkhorn(
            grad_f, problem.mu_s, problem.mu_t, problem.lambda_ent,
            tol=sinkhorn_tol, max_iter=sinkhorn_max_iter,
            potentials=state["potentials"], return_potentials=True)
        if warm_start:
            state["potentials"] = pots
        return plan

    return SplitObjective(
        f_eval=f_eval,
        f_grad=f_grad,
        g_eval=lambda gamma: problem.lambda_ent * negentropy(gamma),
        g_grad=lambda gamma: problem.lambda_ent * negentropy_grad(gamma),
        partial_oracle=oracle,
        residual=lambda gamma: marginal_violation(gamma, problem.mu_s, problem.mu_t),
    )


def ot_cg_split(problem: TransportProblem, warm_start: bool = True) -> SplitObjective:
    """Classic conditional gradient formulation of the same problem.

    Fully linearizes the objective and calls the exact transportation
    simplex as linear minimization oracle. Vertices of the polytope
    carry exact zeros, so the entropy gradient is evaluated with a
    floored argument; the entropy value itself needs no guard.
    """
    state = {"basis": None}

    def lmo(grad_F):
        plan, basis = transport_lmo(
            grad_F, problem.mu_s, problem.mu_t,
            basis=state["basis"] if warm_start else None, return_basis=True)
        if warm_start:
            state["basis"] = basis
        return plan

    split = ot_split(problem)

    def guarded_entropy_grad(gamma):
        return problem.lambda_ent * (1.0 + np.log(np.maximum(gamma, _PLAN_FLOOR)))

    guarded = SplitObjective(
        f_eval=split.f_eval,
        f_grad=split.f_grad,
        g_eval=split.g_eval,
        g_grad=guarded_entropy_grad,
        partial_oracle=split.partial_oracle,
        residual=split.residual,
    )
    return cg_adapter(guarded, lmo)


# ---------------------------------------------------------------------------
# Sinkhorn-Knopp scaling
# ---------------------------------------------------------------------------

def sinkhorn(cost_adj: np.ndarray, mu_s, mu_t, lambda_ent: float,
             tol: float = 1e-9, max_iter: int = 10000,
             method: str = "auto", potentials=None,
             return_potentials: bool = False):
    """Entropic transport plan by Sinkhorn-Knopp matrix scaling.

    Solves ``min <gamma, cost_adj> + lambda_ent * sum(gamma log gamma)``
    over the transport polytope, i.e. returns
    ``gamma = diag(u) K diag(v)`` with ``K = exp(-cost_adj/lambda_ent - 1)``
    scaled until the marginal violation (infinity norm) is at most
    ``tol``. When ``K`` underflows or the scaling vectors overflow, the
    iteration restarts in the log domain, which handles arbitrarily
    small regularization.

    Parameters
    ----------
    cost_adj : (r, c) array
        Adjusted cost of the subproblem (any finite values).
    mu_s, mu_t : arrays
        Row and column marginals (probability histograms).
    lambda_ent : float
        Entropic regularization weight, > 0.
    tol : float
        Threshold on the marginal violation.
    max_iter : int
        Iteration cap; exceeding it raises :class:`ConvergenceError`
        carrying the achieved violation.
    method : {"auto", "scaling", "log"}
        Force a path, mostly for tests. "auto" tries plain scaling and
        falls back to the log domain.
    potentials : optional pair of arrays
        Warm-start log-domain potentials from a previous call.
    return_potentials : bool
        Also return the final log-domain potentials.

    Returns
    -------
    gamma : (r, c) array with strictly positive entries (floored at
        1e-300) meeting the marginal tolerance, or ``(gamma, potentials)``
        when requested.
    """
    a = as_histogram(mu_s)
    b = as_histogram(mu_t)
    cost_adj = np.asarray(cost_adj, dtype=np.float64)
    if cost_adj.shape != (a.size, b.size):
        raise ValueError("cost shape does not match the marginals")
    if lambda_ent <= 0:
        raise ValueError("lambda_ent must be positive")
    if tol <= 0:
        raise ValueError("tol must be positive")
    if method not in ("auto", "scaling", "log"):
        raise ValueError(f"unknown method {method!r}")

    log_kernel = -cost_adj / lambda_ent - 1.0

    use_log = method == "log" or potentials is not None
    if method == "auto" and not use_log:
        # exp underflow makes plain scaling impossible from the start
        if log_kernel.min() < -700.0:
            use_log = True

    if not use_log:
        K = np.exp(log_kernel)
        u = np.ones_like(a)
        v = np.ones_like(b)
        Kv = K @ v
        for _ in range(max_iter):
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                u = a / Kv
                v = b / (K.T @ u)
                Kv = K @ v
                rows = u * Kv
            if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
                if method == "scaling":
                    raise EvaluationError(
                        "scaling iteration produced non-finite values; "
                        "use method='log' or 'auto'")
                use_log = True
                break
            viol = np.max(np.abs(rows - a))
            if viol <= tol:
                gamma = np.maximum(u[:, None] * K * v[None, :], _PLAN_FLOOR)
                if return_potentials:
                    with np.errstate(divide="ignore"):
                        pots = (np.log(u), np.log(v))
                    return gamma, pots
                return gamma
        else:
            # cap exhausted with finite scalings: the log path is the
            # same fixed-point iteration, so retrying cannot help
            raise ConvergenceError(float(np.max(np.abs(rows - a))), max_iter)

    # log-domain path
    with np.errstate(divide="ignore"):
        log_a = np.log(a)
        log_b = np.log(b)
    if potentials is not None:
        pr = np.array(potentials[0], dtype=np.float64, copy=True)
        pc = np.array(potentials[1], dtype=np.float64, copy=True)
    else:
        pr = np.zeros_like(a)
        pc = np.zeros_like(b)
    viol = np.inf
    for _ in range(max_iter):
        pr = log_a - logsumexp(log_kernel + pc[None, :], axis=1)
        pc = log_b - logsumexp(log_kernel + pr[:, None], axis=0)
        log_gamma = log_kernel + pr[:, None] + pc[None, :]
        rows = np.exp(logsumexp(log_gamma, axis=1))
        viol = float(np.max(np.abs(rows - a)))
        if viol <= tol:
            gamma = np.maximum(np.exp(log_gamma), _PLAN_FLOOR)
            if return_potentials:
                return gamma, (pr, pc)
            return gamma
    raise ConvergenceError(viol, max_iter)


# ---------------------------------------------------------------------------
# Exact linear minimization: transportation simplex
# ---------------------------------------------------------------------------

def _tree_duals(cost, adjacency, r, c):
    """Dual potentials solving u_i + v_j = c_ij on the basis tree."""
    u = np.zeros(r)
    v = np.zeros(c)
    seen = [False] * (r + c)
    stack = [0]
    seen[0] = True
    while stack:
        node = stack.pop()
        for other in adjacency[node]:
            if not seen[other]:
                seen[other] = True
                if node < r:  # supply -> demand edge (node, other - r)
                    v[other - r] = cost[node, other - r] - u[node]
                else:
                    u[other] = cost[other, node - r] - v[node - r]
                stack.append(other)
    return u, v


def _tree_path(adjacency, start, goal, n_nodes):
    """Node path between two tree nodes (BFS parent chase)."""
    parent = [-1] * n_nodes
    parent[start] = start
    queue = [start]
    while parent[goal] == -1:
        nxt = []
        for node in queue:
            for other in adjacency[node]:
                if parent[other] == -1:
                    parent[other] = node
                    nxt.append(other)
        queue = nxt
    path = [goal]
    while path[-1] != start:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def _tree_flows(basis, mu_s, mu_t, r, c):
    """Exact basic flows for given marginals by leaf stripping."""
    degree = [0] * (r + c)
    incident = [[] for _ in range(r + c)]
    for t, (i, j) in enumerate(basis):
        degree[i] += 1
        degree[r + j] += 1
        incident[i].append(t)
        incident[r + j].append(t)
    mass = np.concatenate([mu_s, mu_t])
    done = [False] * len(basis)
    flows = np.zeros(len(basis))
    leaves = [n for n in range(r + c) if degree[n] == 1]
    while leaves:
        node = leaves.pop()
        edge = next((t for t in incident[node] if not done[t]), None)
        if edge is None:
            continue
        i, j = basis[edge]
        flows[edge] = mass[node]
        other = r + j if node == i else i
        mass[other] -= mass[node]
        mass[node] = 0.0
        done[edge] = True
        degree[node] -= 1
        degree[other] -= 1
        if degree[other] == 1:
            leaves.append(other)
    return flows


def transport_lmo(cost_adj: np.ndarray, mu_s, mu_t, basis=None,
                  return_basis: bool = False, return_duals: bool = False):
    """Exact minimizer of ``<gamma, cost_adj>`` over the transport polytope.

    Transportation simplex with a north-west-corner start and MODI
    pivoting. Marginals are perturbed by ``i * 1e-12`` (then
    re-normalized) against degenerate pivoting; the returned vertex is
    re-solved on the final basis tree against the original marginals, so
    its row and column sums are exact up to summation error. Optimality
    is certified by dual potentials with all reduced costs ``>= -1e-9``.

    ``basis`` warm-starts from a previous optimal basis (the feasible
    bases depend only on the marginals, so any earlier basis for the
    same marginals is valid). Exceeding the pivot budget raises
    :class:`DegeneracyError`.
    """
    cost = np.asarray(cost_adj, dtype=np.float64)
    a = as_histogram(mu_s)
    b = as_histogram(mu_t)
    r, c = cost.shape
    if not np.all(np.isfinite(cost)):
        raise ValueError("cost must be finite")

    eps0 = 1e-12
    ap = a + eps0 * np.arange(1, r + 1)
    ap = ap / ap.sum()
    bp = b + eps0 * np.arange(1, c + 1)
    bp = bp / bp.sum()

    if basis is None:
        arem = ap.copy()
        brem = bp.copy()
        basis = []
        flows = []
        i = j = 0
        while True:
            x = min(arem[i], brem[j])
            basis.append((i, j))
            flows.append(x)
            arem[i] -= x
            brem[j] -= x
            if i == r - 1 and j == c - 1:
                break
            if arem[i] <= brem[j] and i < r - 1:
                i += 1
            elif j < c - 1:
                j += 1
            else:
                i += 1
        flows = np.array(flows)
    else:
        basis = list(basis)
        if len(basis) != r + c - 1:
            raise ValueError("warm-start basis has the wrong size")
        flows = _tree_flows(basis, ap, bp, r, c)
        if flows.min() < -1e-9:
            raise ValueError("warm-start basis is not feasible for these marginals")
        np.clip(flows, 0.0, None, out=flows)

    max_pivots = 4 * r * c + 1000
    u = v = None
    for pivot in range(max_pivots + 1):
        adjacency = [[] for _ in range(r + c)]
        for i, j in basis:
            adjacency[i].append(r + j)
            adjacency[r + j].append(i)
        u, v = _tree_duals(cost, adjacency, r, c)
        reduced = cost - u[:, None] - v[None, :]
        flat = int(np.argmin(reduced))
        ei, ej = divmod(flat, c)
        if reduced[ei, ej] >= -1e-11:
            break
        if pivot == max_pivots:
            raise DegeneracyError(
                f"pivot budget exhausted after {max_pivots} pivots")

        path = _tree_path(adjacency, ei, r + ej, r + c)
        edge_index = {cell: t for t, cell in enumerate(basis)}
        cycle = []
        for t in range(len(path) - 1):
            na, nb = path[t], path[t + 1]
            cell = (na, nb - r) if na < r else (nb, na - r)
            cycle.append(edge_index[cell])
        # entering cell is +theta; walking the path backwards from the
        # entering cell's demand node, signs alternate -,+,-,...
        minus = cycle[::-1][0::2]
        plus = cycle[::-1][1::2]
        theta_idx = min(minus, key=lambda t: flows[t])
        theta = flows[theta_idx]
        flows[np.array(minus)] -= theta
        for t in plus:
            flows[t] += theta
        basis[theta_idx] = (ei, ej)
        flows[theta_idx] = theta

    final = _tree_flows(basis, a, b, r, c)
    np.clip(final, 0.0, None, out=final)
    gamma = np.zeros((r, c))
    for t, (i, j) in enumerate(basis):
        gamma[i, j] += final[t]

    out = (gamma,)
    if return_basis:
        out = out + (list(basis),)
    if return_duals:
        out = out + ((u, v),)
    return out[0] if len(out) == 1 else out


# ---------------------------------------------------------------------------
# Graphs and synthetic data
# ---------------------------------------------------------------------------

def knn_laplacian(X: np.ndarray, k: int) -> np.ndarray:
    """Symmetrized k-nearest-neighbor graph Laplacian of the rows of X.

    The binary adjacency keeps the k nearest rows per point (self
    excluded, distance ties broken by index order) and is symmetrized by
    W := max(W, W^T); the result D - W is symmetric, PSD, with zero row
    sums.
    """
    X = as_matrix(X)
    n = X.shape[0]
    if not (1 <= k < n):
        raise ValueError(f"need 1 <= k < n, got k={k}, n={n}")
    sq = np.sum(X * X, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * (X @ X.T)
    np.fill_diagonal(d2, np.inf)
    idx = np.argsort(d2, axis=1, kind="stable")[:, :k]
    W = np.zeros((n, n))
    W[np.arange(n)[:, None], idx] = 1.0
    W = np.maximum(W, W.T)
    return np.diag(W.sum(axis=1)) - W


def make_cluster_data(ns: int, nt: int, n_clusters: int = 3,
                      noise: float = 0.05, seed: int = 0):
    """Two-domain 2-D cluster samples with uniform histograms.

    Source points sit in ``n_clusters`` Gaussian blobs; the target blobs
    are a rotated and shifted copy of the source centers with fresh
    noise. Deterministic for a given seed.

    Returns
    -------
    (Xs, Xt, mu_s, mu_t)
    """
    if not (1 <= n_clusters <= min(ns, nt)):
        raise ValueError("need 1 <= n_clusters <= min(ns, nt)")
    if noise < 0:
        raise ValueError("noise must be nonnegative")
    rng = make_rng(seed)
    centers = rng.uniform(0.0, 1.0, size=(n_clusters, 2))
    shift = rng.uniform(0.3, 0.6, size=2)
    angle = math.pi / 6.0
    rot = np.array([[math.cos(angle), -math.sin(angle)],
                    [math.sin(angle), math.cos(angle)]])
    centroid = centers.mean(axis=0)
    centers_t = (centers - centroid) @ rot.T + centroid + shift

    assign_s = np.arange(ns) % n_clusters
    assign_t = np.arange(nt) % n_clusters
    Xs = centers[assign_s] + noise * rng.standard_normal((ns, 2))
    Xt = centers_t[assign_t] + noise * rng.standard_normal((nt, 2))
    return Xs, Xt, uniform_histogram(ns), uniform_histogram(nt)


def squared_distances(Xs: np.ndarray, Xt: np.ndarray) -> np.ndarray:
    """Pairwise squared Euclidean cost matrix between two point sets."""
    Xs = as_matrix(Xs)
    Xt = as_matrix(Xt)
    d2 = (np.sum(Xs * Xs, axis=1)[:, None] + np.sum(Xt * Xt, axis=1)[None, :]
          - 2.0 * (Xs @ Xt.T))
    return np.maximum(d2, 0.0)


# ---------------------------------------------------------------------------
# CSV serialization (dense matrices with a dimension header)
# ---------------------------------------------------------------------------

def save_matrix_csv(path, mat: np.ndarray) -> None:
    """Write a dense matrix as CSV: first row ``rows,cols``, then data."""
    mat = as_matrix(mat)
    r, c = mat.shape
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{r},{c}\n")
        for row in mat:
            # repr of a Python float round-trips exactly
            fh.write(",".join(repr(float(x)) for x in row) + "\n")


def load_matrix_csv(path) -> np.ndarray:
    """Read a matrix written by :func:`save_matrix_csv`."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        if len(header) != 2:
            raise ValueError(f"{path}: malformed dimension header")
        r, c = int(header[0]), int(header[1])
        mat = np.empty((r, c))
        for i in range(r):
            fields = fh.readline().strip().split(",")
            if len(fields) != c:
                raise ValueError(f"{path}: row {i} has {len(fields)} fields, expected {c}")
            mat[i] = [float(x) for x in fields]
    return mat
