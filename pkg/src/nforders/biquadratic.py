"""The fields Q(sqrt(-d), sqrt(-n)): integral bases, the bar action and
relative norms down to Q(sqrt(-d)), prime factorization, the Minkowski
bound, class groups, and the norm-map cardinality condition.

Elements are held in exact coordinates over a verified integral basis.  The
basis itself is stored in "naive" coordinates over {1, sqrt(-d), sqrt(-n),
sqrt(d*n)}, which fixes the multiplication table once; nothing downstream
touches radicals again.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iter_product
from math import gcd, isqrt

from .intmath import (
    is_prime,
    is_squarefree,
    jacobi,
    poly_discriminant,
    polp_factor,
    sqrt_ub,
    squarefree_part,
)
from .lattice import (
    GramForm,
    IntModule,
    UnsupportedFieldError,
    enumerate_by_t2,
    find_generator,
    hnf,
    identity_module,
    smith_normal_form,
    t2_gram,
)
from .quadratic import QuadElem, QuadField, form_class_group, pell_solve


class UnsupportedPrimeError(ValueError):
    """Every scanned equation order has index divisible by the prime."""


# ---------------------------------------------------------------------------
# naive-coordinate arithmetic

# Basis {1, s, t, u} with s = sqrt(-d), t = sqrt(-n), u = sqrt(d*n) and
# s*t = -u, s*u = d*t, t*u = n*s.


def _nmul(d: int, n: int, x, y):
    a, b, c, e = x
    a2, b2, c2, e2 = y
    return (
        a * a2 - d * b * b2 - n * c * c2 + d * n * e * e2,
        a * b2 + b * a2 + n * (c * e2 + e * c2),
        a * c2 + c * a2 + d * (b * e2 + e * b2),
        a * e2 + e * a2 - (b * c2 + c * b2),
    )


def _mat_inv(rows):
    n = len(rows)
    A = [
        [Fraction(x) for x in row] + [Fraction(1 if i == j else 0) for j in range(n)]
        for i, row in enumerate(rows)
    ]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise ValueError("singular basis matrix")
        A[col], A[piv] = A[piv], A[col]
        pv = A[col][col]
        A[col] = [x / pv for x in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return tuple(tuple(row[n:]) for row in A)


def _det(rows) -> Fraction:
    A = [[Fraction(x) for x in r] for r in rows]
    n = len(A)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det *= A[col][col]
        for r in range(col + 1, n):
            f = A[r][col] / A[col][col]
            A[r] = [x - f * y for x, y in zip(A[r], A[col])]
    return det


# ---------------------------------------------------------------------------
# the field and its elements


@dataclass(frozen=True)
class BiquadField:
    """Q(sqrt(-d), sqrt(-n)) together with a fixed integral basis.

    Rows of `intbasis` give the basis elements in naive coordinates; the
    first row must be the element 1.  Construct through integral_basis(),
    which verifies the ring axioms, rather than directly.
    """

    d: int
    n: int
    intbasis: tuple
    disc: int

    degree = 4

    def __post_init__(self):
        for m in (self.d, self.n):
            if m <= 0 or not is_squarefree(m):
                raise ValueError("d and n must be positive squarefree")
        if self.d == self.n:
            raise ValueError("d and n must be distinct")
        rows = tuple(tuple(Fraction(x) for x in row) for row in self.intbasis)
        if len(rows) != 4 or any(len(r) != 4 for r in rows):
            raise ValueError("intbasis must be 4x4")
        object.__setattr__(self, "intbasis", rows)
        object.__setattr__(self, "disc", int(self.disc))

    def from_basis_coords(self, coords) -> "BiquadElem":
        return BiquadElem(self, tuple(Fraction(c) for c in coords))

    def from_naive(self, naive) -> "BiquadElem":
        Bi = _basis_inverse(self)
        nv = [Fraction(x) for x in naive]
        return self.from_basis_coords(
            [sum(nv[i] * Bi[i][j] for i in range(4)) for j in range(4)]
        )

    def one(self) -> "BiquadElem":
        return self.from_naive((1, 0, 0, 0))

    def gens(self):
        """(sqrt(-d), sqrt(-n), sqrt(d*n)) as field elements."""
        return (
            self.from_naive((0, 1, 0, 0)),
            self.from_naive((0, 0, 1, 0)),
            self.from_naive((0, 0, 0, 1)),
        )

    def t2_gram_matrix(self):
        return _t2_matrix(self)

    def real_subfield_data(self) -> tuple[int, int]:
        """(D0, s) with d*n = s*s*D0 and D0 squarefree; Q(sqrt(D0)) is the
        real quadratic subfield."""
        D0 = squarefree_part(self.d * self.n)
        s = isqrt(self.d * self.n // D0)
        return D0, s

    def from_real_quadratic(self, x, y) -> "BiquadElem":
        """x + y*sqrt(D0), embedded via sqrt(D0) = sqrt(d*n)/s."""
        _, s = self.real_subfield_data()
        return self.from_naive((Fraction(x), 0, 0, Fraction(y) / s))

    def mult_matrix(self, e: "BiquadElem"):
        """Rows M[i] = coords(basis_i * e), so coords(x*e) = coords(x)*M."""
        rows = []
        for i in range(4):
            b = self.from_basis_coords([1 if j == i else 0 for j in range(4)])
            rows.append((b * e).coords)
        return tuple(rows)

    def relative_order_rows(self):
        """Coordinate rows of {1, w, sqrt(-n), w*sqrt(-n)} with w the ring
        generator of the integers of Q(sqrt(-d))."""
        if self.d % 4 == 3:
            w = (Fraction(1, 2), Fraction(1, 2), Fraction(0), Fraction(0))
        else:
            w = (Fraction(0), Fraction(1), Fraction(0), Fraction(0))
        wn = _nmul(self.d, self.n, w, (0, 0, 1, 0))
        rows = []
        for naive in ((1, 0, 0, 0), w, (0, 0, 1, 0), wn):
            c = self.from_naive(naive).coords
            if any(x.denominator != 1 for x in c):
                raise ValueError("relative order does not lie in the basis span")
            rows.append([int(x) for x in c])
        return rows

    def torsion_units(self):
        return _torsion(self)

    def fundamental_unit(self) -> "BiquadElem":
        """The continued-fraction unit of the real quadratic subfield,
        embedded; taken from x^2 - D0*y^2 = -1 when that has a solution."""
        D0, _ = self.real_subfield_data()
        r = pell_solve(D0, -1)
        if r.solution is None:
            r = pell_solve(D0, 1)
        if r.solution is None:
            raise UnsupportedFieldError("no unit found for %d" % D0)
        return self.from_real_quadratic(r.solution.x, r.solution.y)

    def __repr__(self):
        return "BiquadField(%d, %d)" % (self.d, self.n)


@lru_cache(maxsize=None)
def _basis_inverse(field: BiquadField):
    return _mat_inv(field.intbasis)


@lru_cache(maxsize=None)
def _t2_matrix(field: BiquadField):
    els = [
        field.from_basis_coords([1 if j == i else 0 for j in range(4)])
        for i in range(4)
    ]
    out = []
    for x in els:
        row = []
        for y in els:
            t = (x * y.complex_conj()).trace()
            assert t.denominator == 1
            row.append(int(t))
        out.append(tuple(row))
    return tuple(out)


@lru_cache(maxsize=None)
def _torsion(field: BiquadField):
    """All roots of unity: exactly the integral elements with T2 = 4."""
    G = GramForm(field.t2_gram_matrix())
    out = []
    for v in enumerate_by_t2(identity_module(field), G, 4):
        u = field.from_basis_coords(v)
        out.extend((u, -u))
    one = field.one()
    for u in out:
        pw = u
        for _ in range(12):
            if pw == one:
                break
            pw = pw * u
        else:
            raise AssertionError("non-torsion unit in the T2 = 4 shell")
    return tuple(sorted(out, key=lambda z: z.coords))


@dataclass(frozen=True)
class BiquadElem:
    field: BiquadField
    coords: tuple

    def __post_init__(self):
        c = tuple(Fraction(x) for x in self.coords)
        if len(c) != 4:
            raise ValueError("need 4 coordinates")
        object.__setattr__(self, "coords", c)

    def _check(self, other):
        if self.field != other.field:
            raise ValueError("elements of different fields")

    def naive(self):
        B = self.field.intbasis
        return tuple(
            sum(self.coords[i] * B[i][j] for i in range(4)) for j in range(4)
        )

    def basis_coords(self):
        return self.coords

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        nv = self.naive()
        return nv[1] == 0 and nv[2] == 0 and nv[3] == 0

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.from_naive((other, 0, 0, 0))
        self._check(other)
        return BiquadElem(
            self.field, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    __radd__ = __add__

    def __neg__(self):
        return BiquadElem(self.field, tuple(-a for a in self.coords))

    def __sub__(self, other):
        return self + (-other if isinstance(other, BiquadElem) else -Fraction(other))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return BiquadElem(self.field, tuple(a * other for a in self.coords))
        self._check(other)
        F = self.field
        return F.from_naive(_nmul(F.d, F.n, self.naive(), other.naive()))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return BiquadElem(
                self.field, tuple(a / Fraction(other) for a in self.coords)
            )
        self._check(other)
        return self * other.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        r = self.field.one()
        base = self
        while e:
            if e & 1:
                r = r * base
            base = base * base
            e >>= 1
        return r

    def bar(self) -> "BiquadElem":
        """Negates sqrt(-n); fixes Q(sqrt(-d)) pointwise."""
        a, b, c, e = self.naive()
        return self.field.from_naive((a, b, -c, -e))

    def complex_conj(self) -> "BiquadElem":
        a, b, c, e = self.naive()
        return self.field.from_naive((a, -b, -c, e))

    def trace(self) -> Fraction:
        return 4 * self.naive()[0]

    def norm(self) -> Fraction:
        """Product of all four conjugates; nonnegative as the field is
        totally imaginary."""
        a, b, _, _ = (self * self.bar()).naive()
        return a * a + self.field.d * b * b

    def abs_norm(self) -> Fraction:
        return self.norm()

    def inverse(self) -> "BiquadElem":
        t = self.bar() * self.complex_conj() * self.complex_conj().bar()
        nv = _nmul(self.field.d, self.field.n, self.naive(), t.naive())
        if nv[0] == 0:
            raise ZeroDivisionError
        assert nv[1] == 0 and nv[2] == 0 and nv[3] == 0
        return t / nv[0]

    def __repr__(self):
        return "BiquadElem(%s)" % (self.coords,)


def rel_norm_EF(e: BiquadElem) -> QuadElem:
    """e * bar(e) as an element of Q(sqrt(-d)): the norm for the quadratic
    step down to the fixed field of bar."""
    a, b, c, ee = (e * e.bar()).naive()
    assert c == 0 and ee == 0
    return QuadElem(QuadField(-e.field.d), a, b)


# ---------------------------------------------------------------------------
# integral bases

_NATIVE_ROWS = (
    (1, 0, 0, 0),
    (Fraction(1, 2), Fraction(1, 2), 0, 0),
    (0, 0, 1, 0),
    (0, 0, Fraction(1, 2), Fraction(-1, 2)),
)

_IDENTITY4 = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]


def integral_basis(d: int, n: int, basis=None, disc: int | None = None) -> BiquadField:
    """Verified integral basis for Q(sqrt(-d), sqrt(-n)).

    Without a basis argument this requires d = 3 mod 4, n = 1 or 2 mod 4,
    and gcd(d, n) = 1, where {1, w, sqrt(-n), w*sqrt(-n)} works, w being
    (1 + sqrt(-d))/2.  Outside those congruence classes callers must supply
    the basis rows in naive {1, sqrt(-d), sqrt(-n), sqrt(d*n)} coordinates
    (first row the element 1) together with the intended field discriminant.
    Supplied data is accepted only if the rows span a ring containing 1 and
    all three radicals whose trace-form determinant equals `disc`; whether
    that ring is genuinely maximal is the caller's responsibility.
    """
    native = basis is None
    if native:
        if not (d % 4 == 3 and n % 4 in (1, 2) and gcd(d, n) == 1):
            raise UnsupportedFieldError(
                "no built-in integral basis for (%d, %d); supply one" % (d, n)
            )
        basis = _NATIVE_ROWS
    rows = tuple(tuple(Fraction(x) for x in row) for row in basis)
    if len(rows) != 4 or any(len(r) != 4 for r in rows):
        raise ValueError("basis must be 4x4")
    if rows[0] != (1, 0, 0, 0):
        raise ValueError("first basis row must be the element 1")
    Bi = _mat_inv(rows)

    def coords(nv):
        return [sum(Fraction(nv[i]) * Bi[i][j] for i in range(4)) for j in range(4)]

    for nv in ((0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)):
        if any(c.denominator != 1 for c in coords(nv)):
            raise ValueError("basis span misses one of the radical generators")
    for i in range(4):
        for j in range(i, 4):
            p = _nmul(d, n, rows[i], rows[j])
            if any(c.denominator != 1 for c in coords(p)):
                raise ValueError(
                    "basis is not closed under multiplication at pair (%d, %d)"
                    % (i, j)
                )
    # trace pairing: Tr picks 4 times the rational naive coordinate
    tg = [[4 * _nmul(d, n, rows[i], rows[j])[0] for j in range(4)] for i in range(4)]
    D = _det(tg)
    if D == 0 or D.denominator != 1:
        raise ValueError("degenerate trace form")
    if disc is not None and D != disc:
        raise ValueError(
            "trace-form discriminant %s does not match declared %d" % (D, disc)
        )
    field = BiquadField(d, n, rows, int(D))
    if native:
        # the built-in rows are literally {1, w, sqrt(-n), w*sqrt(-n)}, so
        # that order being maximal is the same as the rows being identity
        assert field.relative_order_rows() == _IDENTITY4
    return field


# ---------------------------------------------------------------------------
# prime factorization through a primitive element


@dataclass(frozen=True)
class PrimeFactor:
    """One prime of the maximal order above a rational prime: the ideal,
    its ramification index and its residue degree."""

    ideal: object
    e: int
    f: int


def _poly_at(f, theta: BiquadElem):
    acc = theta.field.from_basis_coords((0, 0, 0, 0))
    for c in reversed(f):
        acc = acc * theta + c
    return acc


def _minpoly4(theta: BiquadElem):
    """Constant-first monic minimal polynomial when theta generates the
    whole field, else None."""
    pows = [theta.field.one()]
    for _ in range(4):
        pows.append(pows[-1] * theta)
    # solve x * A = b with rows A[i] = coords(theta^i), b = coords(theta^4)
    A = [pows[i].coords for i in range(4)]
    b = pows[4].coords
    M = [[A[i][j] for i in range(4)] + [b[j]] for j in range(4)]
    for col in range(4):
        piv = next((r for r in range(col, 4) if M[r][col] != 0), None)
        if piv is None:
            return None
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(4):
            if r != col and M[r][col] != 0:
                fac = M[r][col]
                M[r] = [x - fac * y for x, y in zip(M[r], M[col])]
    sol = [M[i][4] for i in range(4)]
    out = []
    for c in sol:
        assert c.denominator == 1  # theta is integral, so the minpoly is
        out.append(-int(c))
    out.append(1)
    assert _poly_at(out, theta).is_zero()
    return out


def _primitive_candidates(E: BiquadField):
    combos = sorted(iter_product(range(4), repeat=3), key=lambda t: (max(t), sum(t), t))
    for c1, c2, c3 in combos:
        if c1 == c2 == c3 == 0:
            continue
        theta = E.from_basis_coords((0, c1, c2, c3))
        f = _minpoly4(theta)
        if f is not None:
            yield theta, f


def factor_rational_prime(E: BiquadField, q: int, theta_index: int = 0):
    """Primes of the maximal order above q as PrimeFactor entries, read off
    the factorization mod q of the minimal polynomial of a primitive
    element whose equation order has index coprime to q.

    theta_index > 0 skips that many usable primitive elements; the choice
    changes the intermediate polynomial but not the resulting ideals.
    """
    from .orders import OrderIdeal, maximal_order

    if not is_prime(q):
        raise ValueError("%d is not prime" % q)
    skipped = 0
    for theta, f in _primitive_candidates(E):
        idx2, rem = divmod(poly_discriminant(f), E.disc)
        assert rem == 0 and idx2 > 0
        idx = isqrt(idx2)
        assert idx * idx == idx2
        if gcd(idx, q) != 1:
            continue
        if skipped < theta_index:
            skipped += 1
            continue
        O = maximal_order(E)
        out = []
        total = 0
        for g, mult in polp_factor(f, q):
            gt = _poly_at(list(g), theta)
            M = E.mult_matrix(gt)
            rows = [[q if i == j else 0 for j in range(4)] for i in range(4)]
            for i in range(4):
                assert all(x.denominator == 1 for x in M[i])
                rows.append([int(x) for x in M[i]])
            mod = hnf(E, rows)
            deg = len(g) - 1
            assert mod.covolume() == q**deg
            out.append(PrimeFactor(OrderIdeal(O, mod), mult, deg))
            total += mult * deg
        assert total == 4
        return sorted(out, key=lambda pf: (pf.f, pf.e, pf.ideal.module.rows))
    if E.disc % q:
        return _factor_obstructed(E, q)
    raise UnsupportedPrimeError(
        "every scanned equation order has index divisible by %d" % q
    )


def _subfield_omegas(E: BiquadField):
    """(field, naive coords of the subfield integer w) for the three
    quadratic subfields."""
    D0, s = E.real_subfield_data()
    out = []
    for D, root in (
        (-E.d, (0, 1, 0, 0)),
        (-E.n, (0, 0, 1, 0)),
        (D0, (0, 0, 0, Fraction(1, s))),
    ):
        om = tuple(Fraction(c) for c in root)
        if D % 4 == 1:
            om = tuple(
                (Fraction(1 if i == 0 else 0) + c) / 2 for i, c in enumerate(om)
            )
        out.append((QuadField(D), om))
    return out


def _split_roots(F, q: int):
    """Roots mod q of the minimal polynomial of w; two distinct exactly when
    q splits (q unramified in F)."""
    c0, c1, _ = F.omega_minpoly()
    return [x for x in range(q) if (x * x + c1 * x + c0) % q == 0]


def _extend_subfield_prime(E: BiquadField, om, q: int, r: int) -> IntModule:
    """The ideal of the maximal order generated by q and w - r."""
    M = E.mult_matrix(E.from_naive(om) - r)
    rows = [[q if i == j else 0 for j in range(4)] for i in range(4)]
    for i in range(4):
        assert all(x.denominator == 1 for x in M[i])
        rows.append([int(x) for x in M[i]])
    return hnf(E, rows)


def _factor_obstructed(E: BiquadField, q: int):
    """Primes above an unramified q for which no scanned equation order has
    coprime index.  That happens exactly when q has more residue-degree-f
    primes than there are monic irreducibles of degree f mod q (q = 2 or 3
    splitting completely, or q = 2 with two degree-2 primes), so the primes
    are built from the quadratic subfields instead: primes of a split
    subfield extend to primes or to products of two primes, and ideal sums
    pick out the common factors.
    """
    from .orders import OrderIdeal, maximal_order, module_mul

    split = []
    for F, om in _subfield_omegas(E):
        roots = _split_roots(F, q)
        if len(roots) == 2:
            split.append([_extend_subfield_prime(E, om, q, r) for r in roots])
    f = residue_degree(E, q)
    if f == 2:
        # split in exactly one subfield, inert in the other two; the two
        # extended ideals are already prime
        (mods,) = split
    else:
        # split in all three; each pairwise sum over two subfields is one of
        # the four primes, and the four pairs hit all of them
        mods = [hnf(E, m1.rows + m2.rows) for m1 in split[0] for m2 in split[1]]
    for m in mods:
        assert m.den == 1 and m.covolume() == q**f
    assert len(set(mods)) == len(mods) == 4 // f
    prod = mods[0]
    for m in mods[1:]:
        prod = module_mul(prod, m)
    assert prod == hnf(E, [[q if i == j else 0 for j in range(4)] for i in range(4)])
    O = maximal_order(E)
    out = [PrimeFactor(OrderIdeal(O, m), 1, f) for m in mods]
    return sorted(out, key=lambda pf: (pf.f, pf.e, pf.ideal.module.rows))


# ---------------------------------------------------------------------------
# Minkowski bound and the class group

_PI_LO = Fraction(3141592653, 10**9)  # < pi, so dividing by it rounds up

_BOUND_CAP = 120


def residue_degree(E: BiquadField, q: int) -> int:
    """Common residue degree of the primes above q: 2 when q is inert in at
    least one quadratic subfield, else 1.  (Inert in all three is
    impossible; the three Frobenius images multiply to the identity.)"""
    D0, _ = E.real_subfield_data()
    for D in (QuadField(-E.d).disc, QuadField(-E.n).disc, QuadField(D0).disc):
        if q == 2:
            if D % 2 and D % 8 == 5:
                return 2
        elif D % q and jacobi(D % q, q) == -1:
            return 2
    return 1


def minkowski_bound(E: BiquadField) -> Fraction:
    """(4/pi)^2 * (4!/4^4) * sqrt(|disc|) as an exact rational upper
    estimate; every ideal class contains an integral ideal of norm at most
    this."""
    return Fraction(3, 2) * sqrt_ub(Fraction(abs(E.disc))) / _PI_LO**2


def _short_element(m: IntModule) -> BiquadElem:
    """Nonzero module element of smallest T2."""
    E = m.ambient
    G = t2_gram(E)
    ball = 2 * sqrt_ub(m.covolume() * sqrt_ub(Fraction(abs(E.disc))))
    while True:
        pts = enumerate_by_t2(m, G, ball)
        if pts:
            return E.from_basis_coords(pts[0])
        ball *= 2


def _reduce_inverse(m: IntModule):
    """(beta, c) with beta a shortest element of m and c = beta * m^(-1),
    an integral ideal of small norm in the inverse class of m."""
    from .orders import module_colon

    E = m.ambient
    beta = _short_element(m)
    inv = module_colon(identity_module(E), m)
    c = inv.transform(E.mult_matrix(beta))
    assert c.den == 1
    return beta, c


def _class_rep(m: IntModule) -> IntModule:
    """Small-norm integral ideal in the same class as m."""
    return _reduce_inverse(_reduce_inverse(m)[1])[1]


def _principal_class(m: IntModule) -> bool:
    _, c = _reduce_inverse(m)
    return find_generator(c, c.covolume()) is not None


def _same_class(a: IntModule, b: IntModule) -> bool:
    from .orders import module_mul

    return _principal_class(module_mul(a, _reduce_inverse(b)[1]))


def principal_generator(E: BiquadField, m: IntModule):
    """Generator of m as a fractional ideal of the maximal order, or None;
    the search runs on a norm-reduced ideal so enumeration stays small."""
    beta, c = _reduce_inverse(m)
    lam = find_generator(c, c.covolume())
    if lam is None:
        return None
    g = beta / lam
    assert identity_module(E).transform(E.mult_matrix(g)) == m
    return g


@dataclass(frozen=True)
class BiquadClassGroup:
    disc: int
    h: int
    structure: tuple


@lru_cache(maxsize=None)
def class_group(E: BiquadField, cap: int = _BOUND_CAP) -> BiquadClassGroup:
    """Class group of the maximal order by Minkowski-bounded enumeration:
    factor every rational prime below the bound, sift out the principal
    prime ideals, then close the remaining classes under multiplication.
    The edge relations of that closure present the group; their Smith form
    gives the invariant factors.
    """
    from .orders import module_mul

    B = minkowski_bound(E)
    if B > cap:
        raise UnsupportedFieldError(
            "minkowski bound %s exceeds the configured cap %d" % (B, cap)
        )
    prime_mods = []
    for q in range(2, int(B) + 1):
        if not is_prime(q):
            continue
        # all primes above q share one residue degree; skip q outright when
        # even its smallest primes land beyond the bound
        if Fraction(q) ** residue_degree(E, q) > B:
            continue
        for pf in factor_rational_prime(E, q):
            if Fraction(q) ** pf.f <= B:
                prime_mods.append(pf.ideal.module)
    prime_mods.sort(key=lambda m: (m.covolume(), m.rows))

    gens = []  # one small representative per nontrivial prime class
    for m in prime_mods:
        r = _class_rep(m)
        if _principal_class(r):
            continue
        if any(_same_class(r, g) for g in gens):
            continue
        gens.append(r)
    if not gens:
        return BiquadClassGroup(E.disc, 1, ())

    k = len(gens)
    classes = [(identity_module(E), (0,) * k)]
    relations = []
    queue = [0]
    while queue:
        rep, vec = classes[queue.pop(0)]
        for gi, g in enumerate(gens):
            prod = _class_rep(module_mul(rep, g))
            nvec = tuple(v + (1 if j == gi else 0) for j, v in enumerate(vec))
            hit = next(
                (i for i, (r, _) in enumerate(classes) if _same_class(prod, r)),
                None,
            )
            if hit is None:
                classes.append((prod, nvec))
                queue.append(len(classes) - 1)
            else:
                rel = tuple(a - b for a, b in zip(nvec, classes[hit][1]))
                if any(rel):
                    relations.append(rel)
    h = len(classes)
    factors = smith_normal_form(relations)
    assert len(factors) == k
    prod_h = 1
    for dd in factors:
        prod_h *= dd
    assert prod_h == h
    return BiquadClassGroup(E.disc, h, tuple(dd for dd in factors if dd > 1))


# ---------------------------------------------------------------------------
# the norm-map cardinality condition


@dataclass(frozen=True)
class NormMapCondition:
    inj_iso: bool
    h_F: int
    h_E: int
    odd_equal: bool


def norm_map_condition(d: int, n: int, E: BiquadField | None = None) -> NormMapCondition:
    """Class-number comparison between F = Q(sqrt(-d)) and E = F(sqrt(-n)).

    Equal numbers make the norm map between the class groups a bijection;
    equal odd numbers is the stronger hypothesis consumed by the
    representation criteria.
    """
    if E is None:
        E = integral_basis(d, n)
    h_F = form_class_group(QuadField(-d).disc).h
    h_E = class_group(E).h
    eq = h_F == h_E
    return NormMapCondition(eq, h_F, h_E, eq and h_F % 2 == 1)
