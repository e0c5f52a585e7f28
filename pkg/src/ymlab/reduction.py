"""Exact verification that the curvature-bracket constraint system forces the
nine bracket unknowns to vanish, plus exact unit-sphere monomial moments.

Unknowns, in fixed column order:

    p_ik           for i, k in {2, 3, 4}          (9 columns)
    p_ik_a         for the same (i, k), a in 1..4 (36 columns)

p_ik stands for a degree-N homogeneous quantity of a direction 4-vector u and
p_ik_a for its partial derivatives; at a fixed generic sample point u they
are treated as independent unknowns tied by the Euler homogeneity relation
sum_a u^a p_ik_a = N p_ik.  The constraint matrix stacks, in order:

    (a) the 9 Euler relations;
    (b) the 4 base direction equations evaluated at u;
    (c) their 16 partial derivatives in u^j (product rule on the explicit
        u coefficients);
    (d) 9 first-derivative exchange relations;
    (e) 9 further exchange relations.

47 rows by 45 columns.  Everything here is exact rational arithmetic
(fractions.Fraction); no floating point anywhere in this module.

Index labels are 1-based to match the direction-vector components u^1..u^4.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

_IDX = (2, 3, 4)
P_ORDER = tuple((i, k) for i in _IDX for k in _IDX)
PA_ORDER = tuple((i, k, a) for (i, k) in P_ORDER for a in (1, 2, 3, 4))
N_COLS = len(P_ORDER) + len(PA_ORDER)  # 45

COLUMN_LABELS = tuple(
    [f"p_{i}{k}" for (i, k) in P_ORDER] + [f"p_{i}{k},{a}" for (i, k, a) in PA_ORDER]
)

# Base equations: _BASE_EQS[e][m] maps (i, k) -> coefficient of p_ik inside the
# u^m bracket of equation e.  Equation 3's "p_43a" misprint is read as p_43.
_BASE_EQS = (
    {
        1: {(2, 2): 1, (3, 3): 1, (4, 4): 1},
        2: {(3, 4): -1, (4, 3): 1},
        3: {(2, 4): 1, (4, 2): -1},
        4: {(2, 3): -1, (3, 2): 1},
    },
    {
        1: {(3, 4): 1, (4, 3): -1},
        2: {(2, 2): -1, (4, 4): 1, (3, 3): 1},
        3: {(3, 2): -1, (2, 3): -1},
        4: {(4, 2): -1, (2, 4): -1},
    },
    {
        1: {(2, 4): -1, (4, 2): 1},
        2: {(2, 3): -1, (3, 2): -1},
        3: {(3, 3): -1, (4, 4): 1, (2, 2): 1},
        4: {(4, 3): -1, (3, 4): -1},
    },
    {
        1: {(2, 3): 1, (3, 2): -1},
        2: {(2, 4): -1, (4, 2): -1},
        3: {(3, 4): -1, (4, 3): -1},
        4: {(4, 4): -1, (3, 3): 1, (2, 2): 1},
    },
)

# First exchange block: p_{3k,2} - p_{2k,3} - p_{4k,1} = 0 and cyclic partners,
# for each k.
_EXCHANGE_D = (
    ((3, 2), (2, 3), (4, 1)),
    ((4, 3), (3, 4), (2, 1)),
    ((2, 4), (4, 2), (3, 1)),
)

# Second exchange block, as listed: p_{24,2} - p_{22,4} - p_{23,1} = 0, ...
_EXCHANGE_E = (
    ((2, 4, 2), (2, 2, 4), (2, 3, 1)),
    ((2, 2, 3), (2, 3, 2), (2, 4, 1)),
    ((2, 3, 4), (2, 4, 3), (2, 2, 1)),
    ((3, 4, 2), (3, 2, 4), (3, 3, 1)),
    ((3, 2, 3), (3, 3, 2), (3, 4, 1)),
    ((3, 3, 4), (3, 4, 3), (3, 2, 1)),
    ((4, 4, 2), (4, 2, 4), (4, 3, 1)),
    ((4, 2, 3), (4, 3, 2), (4, 4, 1)),
    ((4, 3, 4), (4, 4, 3), (4, 2, 1)),
)


def col_p(i: int, k: int) -> int:
    return P_ORDER.index((i, k))


def col_pa(i: int, k: int, a: int) -> int:
    return len(P_ORDER) + PA_ORDER.index((i, k, a))


@dataclass
class ReductionSystem:
    n_level: int
    u: tuple  # 4 Rationals, u^1..u^4
    matrix: list  # 47 rows x 45 Rationals
    labels: tuple = COLUMN_LABELS

    @property
    def shape(self) -> tuple:
        return (len(self.matrix), N_COLS)


def build_system(n_level: int, u, include_exchange_rows: bool = True) -> ReductionSystem:
    """Assemble the constraint matrix at sample point u (4 rationals, not all
    zero).  ``include_exchange_rows=False`` drops blocks (d) and (e); it
    exists only as an ablation control and produces a 29-row system."""
    if n_level < 1:
        raise ValueError("induction level must be >= 1")
    u = tuple(Fraction(x) for x in u)
    if len(u) != 4:
        raise ValueError("u must have 4 components")
    if all(x == 0 for x in u):
        raise ValueError("u = 0 degenerates the base equations")
    uc = {m: u[m - 1] for m in (1, 2, 3, 4)}

    rows = []
    # (a) Euler homogeneity
    for i, k in P_ORDER:
        r = [Fraction(0)] * N_COLS
        for a in (1, 2, 3, 4):
            r[col_pa(i, k, a)] = uc[a]
        r[col_p(i, k)] = Fraction(-n_level)
        rows.append(r)
    # (b) base equations at u
    for eq in _BASE_EQS:
        r = [Fraction(0)] * N_COLS
        for m, combo in eq.items():
            for (i, k), c in combo.items():
                r[col_p(i, k)] += uc[m] * c
        rows.append(r)
    # (c) d/du^j of each base equation
    for eq in _BASE_EQS:
        for j in (1, 2, 3, 4):
            r = [Fraction(0)] * N_COLS
            for (i, k), c in eq.get(j, {}).items():
                r[col_p(i, k)] += c
            for m, combo in eq.items():
                for (i, k), c in combo.items():
                    r[col_pa(i, k, j)] += uc[m] * c
            rows.append(r)
    if include_exchange_rows:
        # (d)
        for (i1, a1), (i2, a2), (i3, a3) in _EXCHANGE_D:
            for k in _IDX:
                r = [Fraction(0)] * N_COLS
                r[col_pa(i1, k, a1)] += 1
                r[col_pa(i2, k, a2)] -= 1
                r[col_pa(i3, k, a3)] -= 1
                rows.append(r)
        # (e)
        for t1, t2, t3 in _EXCHANGE_E:
            r = [Fraction(0)] * N_COLS
            r[col_pa(*t1)] += 1
            r[col_pa(*t2)] -= 1
            r[col_pa(*t3)] -= 1
            rows.append(r)
    return ReductionSystem(n_level, u, rows)


def rref(matrix, column_order=None):
    """Exact reduced row echelon form.  Returns (rows, pivot_columns).

    ``column_order`` permutes the pivot search (used to cross-check the rank
    with an independent elimination order); the returned rows are always
    expressed in the original column order.
    """
    m = [list(row) for row in matrix]
    if not m:
        return [], []
    nrows, ncols = len(m), len(m[0])
    order = list(range(ncols)) if column_order is None else list(column_order)
    piv_cols = []
    r = 0
    for c in order:
        pivot = next((rr for rr in range(r, nrows) if m[rr][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for rr in range(nrows):
            if rr != r and m[rr][c] != 0:
                f = m[rr][c]
                m[rr] = [a - f * b for a, b in zip(m[rr], m[r])]
        piv_cols.append(c)
        r += 1
        if r == nrows:
            break
    return m, piv_cols


def nullspace(system_or_matrix):
    """Exact kernel basis (one vector per free column).  Every returned vector
    v satisfies matrix @ v == 0 exactly; this is re-verified before returning."""
    matrix = (
        system_or_matrix.matrix
        if isinstance(system_or_matrix, ReductionSystem)
        else system_or_matrix
    )
    if not matrix:
        return []
    m, piv = rref(matrix)
    ncols = len(matrix[0])
    in_piv = set(piv)
    basis = []
    for free in range(ncols):
        if free in in_piv:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for r, pc in enumerate(piv):
            v[pc] = -m[r][free]
        basis.append(v)
    for v in basis:
        for row in matrix:
            if sum(a * b for a, b in zip(row, v)) != 0:
                raise AssertionError("exact elimination produced a non-kernel vector")
    return basis


@dataclass
class SampleResult:
    u: tuple
    kernel_dim: int
    p_zero: bool
    offending_vector: tuple | None = None


@dataclass
class ReductionReport:
    n_level: int
    seed: int
    samples: list
    passed: bool
    rank_consistent: bool
    elapsed_ms: float
    note: str = ""

    def to_jsonable(self) -> dict:
        return {
            "n": self.n_level,
            "seed": self.seed,
            "samples": [
                {
                    "u": [str(x) for x in s.u],
                    "kernel_dim": s.kernel_dim,
                    "p_zero": s.p_zero,
                    **(
                        {"offending_vector": [str(x) for x in s.offending_vector]}
                        if s.offending_vector is not None
                        else {}
                    ),
                }
                for s in self.samples
            ],
            "pass": self.passed,
            "rank_consistent": self.rank_consistent,
            "elapsed_ms": self.elapsed_ms,
            "note": self.note,
        }


def verify_forces_zero(n_level: int, samples: int, seed: int) -> ReductionReport:
    """Draw ``samples`` random integer sample points u (coordinates in -9..9,
    never the zero vector), build the system at each, and check that every
    kernel basis vector has all nine p coordinates exactly zero.

    A FAIL is a report outcome, not an exception; if it ever occurs, the
    first suspect is the family of direction-divergence constraints that the
    source derivation mentions but does not list, and which are therefore not
    encoded here (see the note field).
    """
    if n_level < 1 or samples < 1:
        raise ValueError("need n_level >= 1 and samples >= 1")
    rng = random.Random(seed)
    t0 = time.perf_counter()
    results = []
    for _ in range(samples):
        u = tuple(Fraction(rng.randint(-9, 9)) for _ in range(4))
        while all(x == 0 for x in u):
            u = tuple(Fraction(rng.randint(-9, 9)) for _ in range(4))
        system = build_system(n_level, u)
        basis = nullspace(system)
        bad = next((v for v in basis if any(v[c] != 0 for c in range(9))), None)
        results.append(
            SampleResult(
                u=u,
                kernel_dim=len(basis),
                p_zero=bad is None,
                offending_vector=tuple(bad) if bad is not None else None,
            )
        )
    elapsed = (time.perf_counter() - t0) * 1000.0
    passed = all(s.p_zero for s in results)
    dims = {s.kernel_dim for s in results}
    note = ""
    if not passed:
        note = (
            "kernel contains vectors with nonzero p coordinates; the listed "
            "constraint blocks omit the (mostly dependent) divergence "
            "relations, which are the first suspect for a missing equation"
        )
    elif len(dims) > 1:
        note = f"kernel dimension varied across samples: {sorted(dims)}"
    return ReductionReport(
        n_level=n_level,
        seed=seed,
        samples=results,
        passed=passed,
        rank_consistent=len(dims) == 1,
        elapsed_ms=elapsed,
        note=note,
    )


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def sphere_moment(alpha, n: int) -> Fraction:
    """Average of prod_i u_i^{alpha_i} over the unit sphere S^{n-1}, exact.

    Zero if any exponent is odd; otherwise
    prod (alpha_i - 1)!!  /  prod_{k=0}^{|alpha|/2 - 1} (n + 2k).
    """
    if n < 2:
        raise ValueError("sphere dimension parameter must satisfy n >= 2")
    alpha = tuple(int(a) for a in alpha)
    if any(a < 0 for a in alpha):
        raise ValueError("exponents must be nonnegative")
    if any(a % 2 for a in alpha):
        return Fraction(0)
    total = sum(alpha)
    num = 1
    for a in alpha:
        num *= _double_factorial(a - 1)
    den = 1
    for k in range(total // 2):
        den *= n + 2 * k
    return Fraction(num, den)
