"""Deciding free and catalytic transitions between classical objects.

For commuting (classical) objects at fixed inverse temperature the
reachability order of thermal operations is decided exactly by curve
dominance (thermomajorization) and, equivalently, by feasibility of a
Gibbs-stochastic linear program.  Catalytic reachability is attacked from
both sides: free-energy monotones give sound infeasibility certificates,
and a brute-force grid search over small catalysts gives sound feasibility
certificates.  Quantum (non-commuting) inputs only get monotone
certificates or explicit thermal-operation constructions; their general
reachability problem is out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import linprog

from .core import (
    ClassicalObject,
    HamiltonianClass,
    NonInteractingObject,
    ThermoObject,
    classical_tensor,
    gibbs_state,
    object_to_classical,
    partial_trace,
    tensor,
)
from .divergences import INF, as_beta, delta_F_alpha

MAJORIZE_TOL = 1e-10
LP_FEAS_TOL = 1e-9
MONOTONE_TOL = 1e-9
UNITARITY_TOL = 1e-9
COMMUTATION_TOL = 1e-9
MAX_CAT_DIM = 4
MAX_GRID_STEPS = 64

#: Default alpha grid for monotone certificates: log-spaced plus the two
#: dedicated limit points.
DEFAULT_ALPHA_GRID = tuple(np.logspace(-2, 2, 40)) + (1.0, INF)


class Status(str, Enum):
    FEASIBLE = "Feasible"
    INFEASIBLE = "Infeasible"
    UNDETERMINED = "Undetermined"


def _json_safe(value):
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, np.ndarray):
        return _json_safe(value.tolist())
    if isinstance(value, (np.floating, float)):
        v = float(value)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(value, (np.integer,)):
        return int(value)
    return value


@dataclass(frozen=True)
class FeasibilityVerdict:
    """Feasible / Infeasible / Undetermined, with a machine-checkable witness.

    Decisive verdicts always carry a witness; Undetermined never does.
    """

    status: Status
    witness: dict | None = None

    def __post_init__(self):
        if self.status is Status.UNDETERMINED and self.witness is not None:
            raise ValueError("Undetermined verdicts must not carry a witness")
        if self.status is not Status.UNDETERMINED and self.witness is None:
            raise ValueError(f"{self.status.value} verdicts must carry a witness")

    @property
    def is_feasible(self) -> bool:
        return self.status is Status.FEASIBLE

    @property
    def is_infeasible(self) -> bool:
        return self.status is Status.INFEASIBLE

    @property
    def is_undetermined(self) -> bool:
        return self.status is Status.UNDETERMINED

    def to_json(self) -> dict:
        return {"status": self.status.value, "witness": _json_safe(self.witness)}


def feasible(witness: dict) -> FeasibilityVerdict:
    return FeasibilityVerdict(Status.FEASIBLE, witness)


def infeasible(witness: dict) -> FeasibilityVerdict:
    return FeasibilityVerdict(Status.INFEASIBLE, witness)


UNDETERMINED = FeasibilityVerdict(Status.UNDETERMINED, None)


@dataclass(frozen=True)
class ThermoCurve:
    """Piecewise-linear concave curve from (0,0) to (1,1).

    x-coordinates are partial sums of Gibbs weights taken in order of
    descending probability-to-Gibbs ratio; y-coordinates the matching
    partial sums of probabilities.
    """

    breakpoints: tuple

    def xs(self) -> np.ndarray:
        return np.array([b[0] for b in self.breakpoints])

    def ys(self) -> np.ndarray:
        return np.array([b[1] for b in self.breakpoints])

    def value(self, x) -> np.ndarray:
        return np.interp(x, self.xs(), self.ys())

    def is_concave(self, tol: float = 1e-12) -> bool:
        xs, ys = self.xs(), self.ys()
        slopes = np.diff(ys) / np.maximum(np.diff(xs), 1e-300)
        return bool(np.all(np.diff(slopes) <= tol))

    def to_csv_rows(self) -> list:
        return [f"{x!r},{y!r}" for x, y in self.breakpoints]


def _as_classical(obj) -> ClassicalObject:
    if isinstance(obj, ClassicalObject):
        return obj
    if isinstance(obj, ThermoObject):
        return object_to_classical(obj)
    raise TypeError(f"expected a classical or diagonal object, got {type(obj).__name__}")


def thermo_curve(c: ClassicalObject, ctx) -> ThermoCurve:
    """Thermomajorization curve of a classical object at inverse temperature beta."""
    beta = as_beta(ctx)
    c = _as_classical(c)
    g = c.gibbs_weights(beta)
    ratios = c.probs / g
    order = np.argsort(-ratios, kind="stable")
    gx = g[order]
    py = c.probs[order]
    rs = ratios[order]
    points = [(0.0, 0.0)]
    acc_x, acc_y = 0.0, 0.0
    i = 0
    n = len(rs)
    while i < n:
        j = i
        while j + 1 < n and np.isclose(rs[j + 1], rs[i], rtol=1e-9, atol=1e-12):
            j += 1
        acc_x += float(np.sum(gx[i:j + 1]))
        acc_y += float(np.sum(py[i:j + 1]))
        points.append((acc_x, acc_y))
        i = j + 1
    # close numerically to (1, 1)
    last = points[-1]
    points[-1] = (1.0, 1.0) if abs(last[0] - 1) < 1e-9 and abs(last[1] - 1) < 1e-9 else last
    return ThermoCurve(tuple(points))


def thermo_majorizes(src, dst, ctx) -> FeasibilityVerdict:
    """Curve-dominance test: Feasible iff the source curve lies on or above
    the target curve at every breakpoint of either (tolerance 1e-10).

    Boundary equality counts as Feasible; the Infeasible witness carries the
    first crossing point.
    """
    beta = as_beta(ctx)
    src_c = thermo_curve(_as_classical(src), beta)
    dst_c = thermo_curve(_as_classical(dst), beta)
    xs = np.unique(np.concatenate([src_c.xs(), dst_c.xs()]))
    sv = src_c.value(xs)
    dv = dst_c.value(xs)
    deficit = dv - sv
    bad = deficit > MAJORIZE_TOL
    if np.any(bad):
        k = int(np.argmax(bad))
        return infeasible({
            "kind": "curve_crossing",
            "x": float(xs[k]),
            "src_y": float(sv[k]),
            "dst_y": float(dv[k]),
            "deficit": float(deficit[k]),
        })
    return feasible({
        "kind": "curve_dominance",
        "min_margin": float(np.min(sv - dv)),
        "checked_points": int(len(xs)),
    })


def _stack_constraints(src: ClassicalObject, dst: ClassicalObject, beta: float):
    ds, dd = src.dim, dst.dim
    n = dd * ds
    g_src = src.gibbs_weights(beta)
    g_dst = dst.gibbs_weights(beta)
    rows = []
    rhs = []
    for j in range(ds):  # column stochasticity
        row = np.zeros(n)
        row[j::ds] = 1.0
        rows.append(row)
        rhs.append(1.0)
    for i in range(dd):  # Gibbs preservation
        row = np.zeros(n)
        row[i * ds:(i + 1) * ds] = g_src
        rows.append(row)
        rhs.append(g_dst[i])
    for i in range(dd):  # state mapping
        row = np.zeros(n)
        row[i * ds:(i + 1) * ds] = src.probs
        rows.append(row)
        rhs.append(dst.probs[i])
    return np.array(rows), np.array(rhs)


def gibbs_stochastic_feasible(src, dst, ctx) -> FeasibilityVerdict:
    """LP feasibility of a Gibbs-stochastic map taking src to dst.

    Searches for a column-stochastic G >= 0 with G g_src = g_dst and
    G p_src = p_dst.  Feasible verdicts carry G; Infeasible verdicts carry
    the phase-1 gap together with a Farkas certificate when one validates.
    Solver failures yield Undetermined, never a silently wrong answer.
    """
    beta = as_beta(ctx)
    src = _as_classical(src)
    dst = _as_classical(dst)
    a_eq, b_eq = _stack_constraints(src, dst, beta)
    m, n = a_eq.shape
    # Phase-1 form: minimize the total slack of A x + s+ - s- = b over
    # x, s+, s- >= 0; a zero optimum certifies feasibility of A x = b, x >= 0.
    a_full = np.hstack([a_eq, np.eye(m), -np.eye(m)])
    cost = np.concatenate([np.zeros(n), np.ones(2 * m)])
    res = linprog(cost, A_eq=a_full, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status != 0:  # iteration cap or numerical trouble: refuse to guess
        return UNDETERMINED
    gap = float(res.fun)
    if gap <= LP_FEAS_TOL:
        g_mat = np.clip(res.x[:n].reshape(dst.dim, src.dim), 0.0, None)
        return feasible({
            "kind": "gibbs_stochastic_map",
            "matrix": g_mat,
            "phase1_gap": gap,
        })
    witness = {"kind": "lp_phase1_gap", "gap": gap}
    marg = getattr(getattr(res, "eqlin", None), "marginals", None)
    if marg is not None:
        for sign in (1.0, -1.0):
            y = sign * np.asarray(marg, dtype=float)
            if float(np.max(a_eq.T @ y)) <= 1e-7 and float(b_eq @ y) >= 0.5 * gap:
                witness["farkas"] = y
                break
    return infeasible(witness)


def revalidate_gibbs_stochastic(verdict: FeasibilityVerdict, src, dst, ctx,
                                tol: float = 1e-8) -> bool:
    """Check an LP witness against the constraints it claims to satisfy."""
    if not verdict.is_feasible:
        return False
    beta = as_beta(ctx)
    src = _as_classical(src)
    dst = _as_classical(dst)
    g_mat = np.asarray(verdict.witness["matrix"], dtype=float)
    if g_mat.shape != (dst.dim, src.dim) or np.min(g_mat) < -tol:
        return False
    ok_cols = np.allclose(g_mat.sum(axis=0), 1.0, atol=tol, rtol=0)
    ok_gibbs = np.allclose(g_mat @ src.gibbs_weights(beta), dst.gibbs_weights(beta), atol=tol, rtol=0)
    ok_probs = np.allclose(g_mat @ src.probs, dst.probs, atol=tol, rtol=0)
    return bool(ok_cols and ok_gibbs and ok_probs)


@dataclass(frozen=True)
class ThermalOperationSpec:
    """A bath Hamiltonian and a global unitary commuting with H_S + H_B."""

    bath_hamiltonian: HamiltonianClass
    unitary: np.ndarray

    def __post_init__(self):
        u = np.asarray(self.unitary, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError(f"unitary must be square, got {u.shape}")
        dev = float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))
        if dev > UNITARITY_TOL:
            raise ValueError(f"matrix is not unitary: |U+U - 1| = {dev:.3e}")
        u = u.copy()
        u.flags.writeable = False
        object.__setattr__(self, "unitary", u)

    def validate_for(self, system_hamiltonian: HamiltonianClass) -> np.ndarray:
        d_s = system_hamiltonian.dim
        d_b = self.bath_hamiltonian.dim
        if self.unitary.shape[0] != d_s * d_b:
            raise ValueError(
                f"unitary dimension {self.unitary.shape[0]} != system*bath {d_s * d_b}"
            )
        h_tot = (np.kron(system_hamiltonian.matrix, np.eye(d_b))
                 + np.kron(np.eye(d_s), self.bath_hamiltonian.matrix))
        comm = self.unitary @ h_tot - h_tot @ self.unitary
        dev = float(np.max(np.abs(comm)))
        if dev > COMMUTATION_TOL:
            raise ValueError(f"unitary does not conserve energy: |[U, H]| = {dev:.3e}")
        return h_tot


def apply_thermal_operation(p: ThermoObject, spec: ThermalOperationSpec, ctx) -> ThermoObject:
    """Contract with a Gibbs bath: Tr_B[U (rho (x) omega_B) U+].

    The system Hamiltonian is unchanged.  Specs violating the unitarity or
    energy-conservation tolerances are rejected.
    """
    beta = as_beta(ctx)
    spec.validate_for(p.hamiltonian)
    d_s, d_b = p.dim, spec.bath_hamiltonian.dim
    omega_b = gibbs_state(spec.bath_hamiltonian, beta).state
    joint = spec.unitary @ np.kron(p.state, omega_b) @ spec.unitary.conj().T
    resh = joint.reshape(d_s, d_b, d_s, d_b)
    out = np.trace(resh, axis1=1, axis2=3)
    out = 0.5 * (out + out.conj().T)
    out /= np.real(np.trace(out))
    return ThermoObject(out, p.hamiltonian)


def catalytic_necessary(src, dst, ctx, alpha_grid=None) -> FeasibilityVerdict:
    """Monotone-based infeasibility certificate for catalytic free transitions.

    If any free-energy difference on the alpha grid increases from src to
    dst, the transition is certainly infeasible; otherwise Undetermined
    (this is a necessary-condition check only).

    Classical inputs may use the whole grid (classical Renyi divergences obey
    data processing for every alpha >= 0).  For non-commuting inputs the
    sandwiched divergence obeys data processing only from alpha = 1/2 up, so
    smaller grid points are dropped to keep the certificate sound.
    """
    beta = as_beta(ctx)
    grid = DEFAULT_ALPHA_GRID if alpha_grid is None else tuple(alpha_grid)
    try:
        _as_classical(src)
        _as_classical(dst)
    except (ValueError, TypeError):
        grid = tuple(a for a in grid if a >= 0.5)
    for alpha in grid:
        f_src = delta_F_alpha(src, beta, alpha)
        f_dst = delta_F_alpha(dst, beta, alpha)
        if f_dst > f_src + MONOTONE_TOL:
            return infeasible({
                "kind": "monotone_increase",
                "monotone": "delta_F_alpha",
                "alpha": alpha,
                "gap": float(f_dst - f_src),
                "src_value": float(f_src),
                "dst_value": float(f_dst),
            })
    return UNDETERMINED


def _descending_compositions(total: int, parts: int):
    """Strictly positive weakly-decreasing integer compositions, lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total - parts + 1, (total + parts - 1) // parts - 1, -1):
        for rest in _descending_compositions(total - first, parts - 1):
            if rest[0] <= first:
                yield (first,) + rest


def catalytic_bruteforce(src, dst, ctx, max_cat_dim: int = 2,
                         grid_steps: int = 32) -> FeasibilityVerdict:
    """Grid search for a catalyst making dst (x) c thermomajorized by src (x) c.

    Catalyst Hamiltonians are trivial (all levels at zero energy) and
    probabilities live on a simplex grid with the given denominator.  Finds
    Feasible with the first working catalyst in enumeration order, or
    Undetermined once the grid is exhausted; the grid is not exhaustive, so
    it never claims Infeasible.
    """
    beta = as_beta(ctx)
    if max_cat_dim > MAX_CAT_DIM:
        raise ValueError(f"max_cat_dim {max_cat_dim} exceeds cost guard {MAX_CAT_DIM}")
    if grid_steps > MAX_GRID_STEPS:
        raise ValueError(f"grid_steps {grid_steps} exceeds cost guard {MAX_GRID_STEPS}")
    src = _as_classical(src)
    dst = _as_classical(dst)
    direct = thermo_majorizes(src, dst, beta)
    if direct.is_feasible:
        return feasible({
            "kind": "catalyst",
            "catalyst_probs": [1.0],
            "catalyst_energies": [0.0],
            "note": "no catalyst needed",
            "direct": direct.witness,
        })
    for cat_dim in range(2, max_cat_dim + 1):
        for comp in _descending_compositions(grid_steps, cat_dim):
            probs = np.array(comp, dtype=float) / grid_steps
            cat = ClassicalObject(probs, np.zeros(cat_dim))
            verdict = thermo_majorizes(classical_tensor(src, cat),
                                       classical_tensor(dst, cat), beta)
            if verdict.is_feasible:
                return feasible({
                    "kind": "catalyst",
                    "catalyst_probs": probs,
                    "catalyst_energies": np.zeros(cat_dim),
                    "joint_margin": verdict.witness["min_margin"],
                })
    return UNDETERMINED


def revalidate_catalyst(verdict: FeasibilityVerdict, src, dst, ctx) -> bool:
    """Re-run the majorization check behind a catalyst witness."""
    if not verdict.is_feasible or verdict.witness.get("kind") != "catalyst":
        return False
    beta = as_beta(ctx)
    cat = ClassicalObject(np.asarray(verdict.witness["catalyst_probs"], dtype=float),
                          np.asarray(verdict.witness["catalyst_energies"], dtype=float))
    src = _as_classical(src)
    dst = _as_classical(dst)
    if cat.dim == 1:
        return thermo_majorizes(src, dst, beta).is_feasible
    return thermo_majorizes(classical_tensor(src, cat),
                            classical_tensor(dst, cat), beta).is_feasible


def correlated_catalytic_check(src_ab, ctx, dst=None) -> FeasibilityVerdict:
    """Certify decorrelation as a correlated-catalytic free transition.

    The decorrelation p_AB -> p_A (x) p_B is always reachable when the
    catalyst may end correlated with the system (it keeps its marginal).
    Arbitrary target pairs are not decided here: anything other than the
    marginal product yields Undetermined.
    """
    if not isinstance(src_ab, NonInteractingObject) or len(src_ab.partition) != 2:
        raise ValueError("correlated_catalytic_check requires a bipartite non-interacting object")
    beta = as_beta(ctx)
    p_a = partial_trace(src_ab, [0])
    p_b = partial_trace(src_ab, [1])
    product = tensor(p_a, p_b)
    if dst is None or dst == product:
        already_product = src_ab.obj == product
        return feasible({
            "kind": "marginal-preserving",
            "transition": "decorrelation",
            "identity": bool(already_product),
        })
    return UNDETERMINED


def decide_catalytic(src, dst, ctx, max_cat_dim: int = 2, grid_steps: int = 32,
                     alpha_grid=None) -> FeasibilityVerdict:
    """Cheapest-first pipeline for catalytic reachability.

    Order: direct free check (sound for Feasible, since free transitions are
    catalytic with a trivial catalyst), then monotone certificates (sound
    for Infeasible), then brute-force catalyst search (sound for Feasible).
    First decisive verdict wins; exhausted searches yield Undetermined.
    Non-diagonal quantum inputs only pass through the monotone stage.
    """
    beta = as_beta(ctx)
    try:
        src_c = _as_classical(src)
        dst_c = _as_classical(dst)
    except (ValueError, TypeError):
        return catalytic_necessary(src, dst, beta, alpha_grid)
    direct = thermo_majorizes(src_c, dst_c, beta)
    if direct.is_feasible:
        return direct
    necessary = catalytic_necessary(src_c, dst_c, beta, alpha_grid)
    if necessary.is_infeasible:
        return necessary
    brute = catalytic_bruteforce(src_c, dst_c, beta, max_cat_dim=max_cat_dim,
                                 grid_steps=grid_steps)
    if brute.is_feasible:
        return brute
    return UNDETERMINED


def decide_free(src, dst, ctx) -> FeasibilityVerdict:
    """Exact decision for classical free transitions (no catalyst)."""
    return thermo_majorizes(_as_classical(src), _as_classical(dst), as_beta(ctx))
