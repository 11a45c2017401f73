"""Exact lattice algorithms on rank-2 and rank-4 modules in number fields.

Modules are Z-lattices given by integer basis rows over a common denominator,
kept in a canonical Hermite normal form: row i has its pivot on the diagonal,
zeros to the right of it, pivots positive, and the entries below each pivot
reduced modulo the pivot.  All reductions, enumerations and generator
searches run in exact integer/rational arithmetic; square roots only ever
enter as explicit rational upper/lower bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, floor, gcd, lcm

from .intmath import sqrt_lb, sqrt_ub
from .quadratic import QuadField, cf_sqrt, pell_solve

Rat = Fraction


class UnsupportedFieldError(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer row HNF


def _hnf_upper(rows: list[list[int]]) -> list[list[int]]:
    """Row echelon HNF, pivots left to right; zero rows dropped at the end."""
    A = [list(r) for r in rows]
    if not A:
        return A
    m, n = len(A), len(A[0])
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, m) if A[i][col]), None)
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        for i in range(row + 1, m):
            while A[i][col]:
                q = A[row][col] // A[i][col]
                A[row] = [a - q * b for a, b in zip(A[row], A[i])]
                A[row], A[i] = A[i], A[row]
        if A[row][col] < 0:
            A[row] = [-x for x in A[row]]
        row += 1
    A = A[:row]
    # reduce entries above each pivot
    pivots = [next(j for j, x in enumerate(r) if x) for r in A]
    for i, pc in enumerate(pivots):
        p = A[i][pc]
        for k in range(i):
            q = A[k][pc] // p
            if q:
                A[k] = [a - q * b for a, b in zip(A[k], A[i])]
    return A


def hnf_matrix(rows) -> list[list[int]]:
    """Canonical HNF with pivots on the diagonal and zeros above-right.

    Columns are processed right to left, so for a full-rank square input the
    result is lower triangular with reduced entries below each pivot; this is
    the shape all modules in this package are stored in.
    """
    rev = [list(r)[::-1] for r in rows]
    H = _hnf_upper(rev)
    return [r[::-1] for r in reversed(H)]


def hnf_with_transform(rows):
    """(H, U) with U unimodular, U*rows = H (upper echelon, zero rows kept)."""
    A = [list(r) for r in rows]
    m = len(A)
    n = len(A[0]) if A else 0
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, m) if A[i][col]), None)
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        U[row], U[piv] = U[piv], U[row]
        for i in range(row + 1, m):
            while A[i][col]:
                q = A[row][col] // A[i][col]
                A[row] = [a - q * b for a, b in zip(A[row], A[i])]
                U[row] = [a - q * b for a, b in zip(U[row], U[i])]
                A[row], A[i] = A[i], A[row]
                U[row], U[i] = U[i], U[row]
        if A[row][col] < 0:
            A[row] = [-x for x in A[row]]
            U[row] = [-x for x in U[row]]
        row += 1
    return A, U


def kernel_int(rows) -> list[list[int]]:
    """Basis of the left kernel {x integer : x*rows = 0}."""
    H, U = hnf_with_transform(rows)
    return [U[i] for i in range(len(H)) if not any(H[i])]


def _det_int(rows) -> int:
    n = len(rows)
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j]:
            minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
            total += (-1 if j % 2 else 1) * rows[0][j] * _det_int(minor)
    return total


def smith_normal_form(rows) -> list[int]:
    """Invariant factors d1 | d2 | ... of the integer row lattice.

    Computed as quotients of k x k minor gcds after an HNF compression, which
    is cheap at the handful-of-columns sizes used here.  Rank-deficient input
    returns fewer factors than columns."""
    H = hnf_matrix(rows)
    if not H:
        return []
    m, n = len(H), len(H[0])
    out = []
    prev = 1
    for k in range(1, min(m, n) + 1):
        g = 0
        for ris in combinations(range(m), k):
            for cis in combinations(range(n), k):
                sub = [[H[i][j] for j in cis] for i in ris]
                g = gcd(g, _det_int(sub))
        if g == 0:
            break
        out.append(g // prev)
        prev = g
    return out


# ---------------------------------------------------------------------------
# modules


@dataclass(frozen=True)
class IntModule:
    """(1/den) times the row span of `rows`, in ambient integral-basis
    coordinates.  Construction canonicalizes, so equal modules compare equal."""

    ambient: object
    rows: tuple
    den: int

    def __post_init__(self):
        rows = [list(map(int, r)) for r in self.rows]
        den = int(self.den)
        if den == 0:
            raise ValueError("zero denominator")
        if den < 0:
            den = -den
        H = hnf_matrix(rows)
        r = getattr(self.ambient, "degree", None) or len(H)
        if len(H) != r:
            raise ValueError("module is not full rank")
        g = den
        for row in H:
            for x in row:
                g = gcd(g, x)
        H = [[x // g for x in row] for row in H]
        den //= g
        object.__setattr__(self, "rows", tuple(tuple(r) for r in H))
        object.__setattr__(self, "den", den)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def covolume(self) -> Fraction:
        det = 1
        for i in range(self.rank):
            det *= self.rows[i][i]
        return Fraction(det, self.den**self.rank)

    def contains_coords(self, coords) -> bool:
        """Membership of the ambient element with the given rational
        integral-basis coordinates."""
        v = [Fraction(c) * self.den for c in coords]
        n = self.rank
        x = [Fraction(0)] * n
        for i in range(n - 1, -1, -1):
            s = v[i] - sum(x[k] * self.rows[k][i] for k in range(i + 1, n))
            x[i] = s / self.rows[i][i]
            if x[i].denominator != 1:
                return False
        return True

    def contains_module(self, other: "IntModule") -> bool:
        return all(
            self.contains_coords([Fraction(c, other.den) for c in row])
            for row in other.rows
        )

    def add(self, other: "IntModule") -> "IntModule":
        L = lcm(self.den, other.den)
        rows = [[c * (L // self.den) for c in r] for r in self.rows] + [
            [c * (L // other.den) for c in r] for r in other.rows
        ]
        return IntModule(self.ambient, tuple(map(tuple, rows)), L)

    def intersect(self, other: "IntModule") -> "IntModule":
        L = lcm(self.den, other.den)
        B1 = [[c * (L // self.den) for c in r] for r in self.rows]
        B2 = [[c * (L // other.den) for c in r] for r in other.rows]
        stacked = B1 + [[-c for c in r] for r in B2]
        ker = kernel_int(stacked)
        r = self.rank
        rows = []
        for vec in ker:
            rows.append(
                [sum(vec[i] * B1[i][j] for i in range(r)) for j in range(r)]
            )
        return IntModule(self.ambient, tuple(map(tuple, rows)), L)

    def transform(self, M) -> "IntModule":
        """Module spanned by the images row*M of the basis rows, with M a
        rational matrix acting on integral-basis coordinates."""
        M = [[Fraction(x) for x in row] for row in M]
        d = 1
        for row in M:
            for x in row:
                d = lcm(d, x.denominator)
        n = self.rank
        rows = []
        for r in self.rows:
            rows.append(
                [int(sum(r[i] * M[i][j] * d for i in range(n))) for j in range(n)]
            )
        return IntModule(self.ambient, tuple(map(tuple, rows)), self.den * d)

    def index_in(self, other: "IntModule") -> Fraction:
        """[other : self] as a positive rational (integer iff self <= other)."""
        return self.covolume() / other.covolume()


def hnf(ambient, rows, den: int = 1) -> IntModule:
    return IntModule(ambient, tuple(tuple(int(x) for x in r) for r in rows), den)


def identity_module(ambient) -> IntModule:
    r = ambient.degree
    rows = tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r))
    return IntModule(ambient, rows, 1)


# ---------------------------------------------------------------------------
# T2 Gram forms


@dataclass(frozen=True)
class GramForm:
    g: tuple

    def __post_init__(self):
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.g)
        object.__setattr__(self, "g", rows)

    @property
    def dim(self) -> int:
        return len(self.g)

    def bilinear(self, u, v) -> Fraction:
        return sum(
            Fraction(u[i]) * self.g[i][j] * Fraction(v[j])
            for i in range(self.dim)
            for j in range(self.dim)
        )

    def apply(self, v) -> Fraction:
        return self.bilinear(v, v)

    def is_positive_definite(self) -> bool:
        # leading principal minors via fraction elimination
        n = self.dim
        A = [[self.g[i][j] for j in range(n)] for i in range(n)]
        for k in range(n):
            if A[k][k] <= 0:
                return False
            for i in range(k + 1, n):
                f = A[i][k] / A[k][k]
                for j in range(k, n):
                    A[i][j] -= f * A[k][j]
        return True


def t2_gram(field) -> GramForm:
    """Gram matrix of T2(x) = sum over embeddings of |x|^2 on the integral
    basis.  Its determinant is |disc| of the field."""
    if field.degree == 2:
        D = field.D
        if D < 0:
            if D % 4 == 1:
                return GramForm(((2, 1), (1, Fraction(1 - D, 2))))
            return GramForm(((2, 0), (0, -2 * D)))
        # real quadratic: conjugation is trivial in each real embedding
        if D % 4 == 1:
            return GramForm(((2, 1), (1, Fraction(1 + D, 2))))
        return GramForm(((2, 0), (0, 2 * D)))
    return GramForm(field.t2_gram_matrix())


# ---------------------------------------------------------------------------
# exact LLL


@dataclass(frozen=True)
class LatticeBasis:
    """A not-necessarily-HNF basis (LLL output keeps the reduced order)."""

    ambient: object
    rows: tuple
    den: int

    def to_module(self) -> IntModule:
        return IntModule(self.ambient, self.rows, self.den)


def lll_reduce(m, g: GramForm, delta: Fraction = Fraction(3, 4)) -> LatticeBasis:
    """LLL with exact rational Gram-Schmidt data; delta defaults to 3/4."""
    if not g.is_positive_definite():
        raise ValueError("Gram form must be positive definite")
    basis = [list(r) for r in m.rows]
    n = len(basis)

    def gso():
        mu = [[Fraction(0)] * n for _ in range(n)]
        B = [Fraction(0)] * n
        for i in range(n):
            B[i] = g.apply(basis[i])
            for j in range(i):
                mu[i][j] = g.bilinear(basis[i], basis[j])
                mu[i][j] -= sum(mu[i][l] * mu[j][l] * B[l] for l in range(j))
                mu[i][j] /= B[j]
                B[i] -= mu[i][j] * mu[i][j] * B[j]
        return mu, B

    mu, B = gso()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = floor(mu[k][j] + Fraction(1, 2))
            if q:
                basis[k] = [a - q * b for a, b in zip(basis[k], basis[j])]
                mu, B = gso()
        if B[k] >= (delta - mu[k][k - 1] ** 2) * B[k - 1]:
            k += 1
        else:
            basis[k], basis[k - 1] = basis[k - 1], basis[k]
            mu, B = gso()
            k = max(k - 1, 1)
    return LatticeBasis(m.ambient, tuple(map(tuple, basis)), m.den)


# ---------------------------------------------------------------------------
# Fincke-Pohst enumeration


def _fp_decompose(A):
    """Quadratic-form Cholesky: Q(x) = sum_i q[i][i]*(x_i + sum_{j>i} q[i][j]x_j)^2."""
    n = len(A)
    q = [[Fraction(x) for x in row] for row in A]
    for i in range(n):
        if q[i][i] <= 0:
            raise ValueError("form not positive definite")
        orig = [q[i][j] for j in range(i + 1, n)]
        for j in range(i + 1, n):
            q[i][j] = q[i][j] / q[i][i]
        for j in range(i + 1, n):
            t = orig[j - i - 1]
            for k in range(j, n):
                q[j][k] -= t * q[i][k]
    return q


def enumerate_by_t2(m, g: GramForm, bound) -> list:
    """All nonzero lattice vectors v of the module with g(v) <= bound, one
    of each +-pair, as tuples of rational ambient coordinates.  Sorted by
    (g(v), coordinates); complete by exact pruning."""
    bound = Fraction(bound)
    if bound <= 0:
        return []
    red = lll_reduce(m, g)
    rows = [list(r) for r in red.rows]
    n = len(rows)
    den = red.den
    # Gram of the reduced integer rows; search g(x*rows/den) <= bound
    A = [[g.bilinear(rows[i], rows[j]) for j in range(n)] for i in range(n)]
    q = _fp_decompose(A)
    budget = bound * den * den
    out = []
    x = [0] * n

    def descend(i, rem):
        # rem = remaining budget at level i
        if i < 0:
            if any(x):
                vec = tuple(
                    Fraction(sum(x[k] * rows[k][j] for k in range(n)), den)
                    for j in range(n)
                )
                out.append(vec)
            return
        U = sum(q[i][j] * x[j] for j in range(i + 1, n))
        s = sqrt_ub(rem / q[i][i])
        lo = ceil(-s - U)
        hi = floor(s - U)
        for xi in range(lo, hi + 1):
            t = q[i][i] * (xi + U) ** 2
            if t <= rem:
                x[i] = xi
                descend(i - 1, rem - t)
        x[i] = 0

    descend(n - 1, budget)
    # canonical sign, dedupe, sort
    seen = {}
    for vec in out:
        for c in vec:
            if c != 0:
                if c < 0:
                    vec = tuple(-y for y in vec)
                break
        seen[vec] = g.apply(vec)
    return sorted(seen, key=lambda v: (seen[v], v))


# ---------------------------------------------------------------------------
# principal-ideal generator search


def _canonical_pick(field, coords_list, g: GramForm):
    best = None
    best_key = None
    for coords in coords_list:
        for c in coords:
            if c != 0:
                if c < 0:
                    coords = tuple(-y for y in coords)
                break
        key = (g.apply(coords), coords)
        if best_key is None or key < best_key:
            best, best_key = coords, key
    return field.from_basis_coords(best) if best is not None else None


def _unit_ladder(field, module, max_power: int = 64):
    """Smallest m >= 1 with eps^m stabilizing the module, eps the fundamental
    continued-fraction unit of the real quadratic subfield; returns (D0, m,
    convergent list over m periods)."""
    D0, s = field.real_subfield_data()
    r = pell_solve(D0, -1)
    if r.solution is None:
        r = pell_solve(D0, 1)
    x0, y0 = r.solution.x, r.solution.y
    eps = field.from_real_quadratic(Fraction(x0), Fraction(y0))
    m = 1
    while m <= max_power:
        u = eps**m
        M = field.mult_matrix(u)
        stab = all(
            module.contains_coords(
                [
                    sum(Fraction(row[i], module.den) * M[i][j] for i in range(4))
                    for j in range(4)
                ]
            )
            for row in module.rows
        )
        if stab:
            break
        m += 1
    else:
        raise UnsupportedFieldError(
            "no power of the fundamental unit up to %d stabilizes the module"
            % max_power
        )
    cf = cf_sqrt(D0)
    l = len(cf.period)
    quots = [cf.a0] + list(cf.period) * m
    # convergents gamma_{-1} = 1, gamma_0, ..., gamma_{m*l - 1} = eps^m
    gammas = [(1, 0)]
    h1, h2 = 1, 0
    k1, k2 = 0, 1
    for a in quots[: m * l]:
        h1, h2 = a * h1 + h2, h1
        k1, k2 = a * k1 + k2, k1
        gammas.append((h1, k1))
    return D0, m, gammas


def find_generator(module: IntModule, norm, fundamental_unit_bound=None):
    """Element alpha of the module with |absolute norm| equal to `norm`,
    which forces alpha*O = module for any order O the module is an ideal of
    with index `norm`; None when the exhaustive search ball is empty, which
    proves no such element exists.

    The search ball is exact for rank 2 (finite unit group).  For rank 4
    the module is swept window by window along the continued-fraction
    convergents of the real quadratic subfield, which tile one fundamental
    domain of the unit action on the ratio of the two complex absolute
    values; passing fundamental_unit_bound instead runs a single ball
    T2 <= r * norm^(2/r) * fundamental_unit_bound.
    """
    field = module.ambient
    r = field.degree
    norm = Fraction(norm)
    if norm <= 0:
        raise ValueError("norm must be positive")
    G = t2_gram(field)
    if r == 2:
        if field.D > 0:
            raise UnsupportedFieldError("generator search needs an imaginary field")
        bound = 2 * norm * (
            Fraction(fundamental_unit_bound) if fundamental_unit_bound else 1
        )
        cands = [
            v
            for v in enumerate_by_t2(module, G, bound)
            if field.from_basis_coords(v).abs_norm() == norm
        ]
        return _canonical_pick(field, cands, G)

    if fundamental_unit_bound is not None:
        bound = r * sqrt_ub(norm) * Fraction(fundamental_unit_bound)
        cands = [
            v
            for v in enumerate_by_t2(module, G, bound)
            if field.from_basis_coords(v).abs_norm() == norm
        ]
        return _canonical_pick(field, cands, G)

    # window ladder over the real-subfield convergents
    D0, m, gammas = _unit_ladder(field, module)
    su = sqrt_ub(Fraction(D0))
    sl = sqrt_lb(Fraction(D0))
    cands = []
    for i in range(len(gammas) - 1):
        h, k = gammas[i]
        h2, k2 = gammas[i + 1]
        Q = abs(h * h - D0 * k * k)  # |N(gamma_i)|
        # window width g = (eta/eta')^2 = eta^4 / N(eta)^2, eta = gamma_{i+1}*conj(gamma_i)
        A = h2 * h - D0 * k2 * k
        Bc = k2 * h - h2 * k
        n_eta = A * A - D0 * Bc * Bc
        # eta^2 = (A^2 + D0 B^2) + 2AB sqrt(D0); eta^4 = its square
        p2, q2 = A * A + D0 * Bc * Bc, 2 * A * Bc
        P4 = p2 * p2 + D0 * q2 * q2
        Q4 = 2 * p2 * q2
        g_ub = Fraction(P4 + Q4 * (su if Q4 > 0 else sl), n_eta * n_eta)
        g_lb = Fraction(P4 + Q4 * (sl if Q4 > 0 else su), n_eta * n_eta)
        if g_lb <= 0:
            g_lb = Fraction(1)
        # T2(alpha * conj(gamma_i)) <= 2 Q (sqrt(norm*g) + sqrt(norm/g))
        ball = 2 * Q * (sqrt_ub(norm * g_ub) + sqrt_ub(norm / g_lb))
        gamma_bar = field.from_real_quadratic(Fraction(h), Fraction(-k))
        M = field.mult_matrix(gamma_bar)
        Gi = GramForm(
            tuple(
                tuple(
                    sum(
                        M[a][i2] * G.g[i2][j2] * M[b][j2]
                        for i2 in range(4)
                        for j2 in range(4)
                    )
                    for b in range(4)
                )
                for a in range(4)
            )
        )
        for v in enumerate_by_t2(module, Gi, ball):
            if field.from_basis_coords(v).abs_norm() == norm:
                cands.append(v)
    return _canonical_pick(field, cands, G)
