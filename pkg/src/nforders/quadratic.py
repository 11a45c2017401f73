"""Quadratic fields Q(sqrt(D)): elements, splitting, form class groups, Pell.

Elements are a + b*sqrt(D) with exact rational a, b.  The integral basis is
{1, w} with w = (1+sqrt(D))/2 when D = 1 mod 4 and w = sqrt(D) otherwise.
Class groups are computed on reduced binary quadratic forms (imaginary side
only), and Pell equations through the continued fraction of sqrt(D).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .intmath import is_prime, is_square, is_squarefree, jacobi, xgcd

Rat = Fraction


def _rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError("expected int or Fraction, got %r" % type(x).__name__)


@dataclass(frozen=True)
class QuadField:
    """Q(sqrt(D)) for squarefree D != 0, 1."""

    D: int
    degree = 2

    def __post_init__(self):
        if self.D in (0, 1) or not is_squarefree(self.D):
            raise ValueError("QuadField needs squarefree D != 0, 1, got %d" % self.D)

    @property
    def disc(self) -> int:
        return self.D if self.D % 4 == 1 else 4 * self.D

    @property
    def is_imaginary(self) -> bool:
        return self.D < 0

    def __call__(self, a, b=0) -> "QuadElem":
        return QuadElem(self, _rat(a), _rat(b))

    def sqrt_gen(self) -> "QuadElem":
        return QuadElem(self, Fraction(0), Fraction(1))

    def omega(self) -> "QuadElem":
        if self.D % 4 == 1:
            return QuadElem(self, Fraction(1, 2), Fraction(1, 2))
        return self.sqrt_gen()

    def omega_minpoly(self) -> list[int]:
        # constant term first; x^2 - x - (D-1)/4 or x^2 - D
        if self.D % 4 == 1:
            return [-(self.D - 1) // 4, -1, 1]
        return [-self.D, 0, 1]

    def from_basis_coords(self, coords) -> "QuadElem":
        """Element x + y*w from rational coordinates (x, y)."""
        x, y = (_rat(c) for c in coords)
        return self(x) + self(y) * self.omega()

    def __repr__(self):
        return "QuadField(%d)" % self.D


@dataclass(frozen=True)
class QuadElem:
    field: QuadField
    a: Fraction
    b: Fraction

    def _check(self, other: "QuadElem"):
        if self.field != other.field:
            raise ValueError("elements of different fields")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadElem(self.field, self.a + other, self.b)
        self._check(other)
        return QuadElem(self.field, self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(self.field, -self.a, -self.b)

    def __sub__(self, other):
        return self + (-other if isinstance(other, QuadElem) else -_rat(other))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadElem(self.field, self.a * other, self.b * other)
        self._check(other)
        D = self.field.D
        return QuadElem(
            self.field,
            self.a * other.a + D * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadElem(self.field, self.a / other, self.b / other)
        self._check(other)
        n = other.norm()
        if n == 0:
            raise ZeroDivisionError
        num = self * other.conj()
        return QuadElem(self.field, num.a / n, num.b / n)

    def __pow__(self, e: int):
        if e < 0:
            return (self.field(1) / self) ** (-e)
        r = self.field(1)
        base = self
        while e:
            if e & 1:
                r = r * base
            base = base * base
            e >>= 1
        return r

    def conj(self) -> "QuadElem":
        return QuadElem(self.field, self.a, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a - self.field.D * self.b * self.b

    def abs_norm(self) -> Fraction:
        return abs(self.norm())

    def trace(self) -> Fraction:
        return 2 * self.a

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def is_rational(self) -> bool:
        return self.b == 0

    def integral_coords(self) -> tuple[Fraction, Fraction]:
        """Coordinates (x, y) with self = x + y*w in the {1, w} basis."""
        if self.field.D % 4 == 1:
            return self.a - self.b, 2 * self.b
        return self.a, self.b

    def is_integral(self) -> bool:
        x, y = self.integral_coords()
        return x.denominator == 1 and y.denominator == 1

    def __repr__(self):
        return "QuadElem(%s + %s*sqrt(%d))" % (self.a, self.b, self.field.D)


def from_integral_coords(F: QuadField, x, y) -> QuadElem:
    return F(x) + F(y) * F.omega()


# ---------------------------------------------------------------------------
# prime splitting


@dataclass(frozen=True)
class SplitResult:
    kind: str  # "split" | "inert" | "ramified"
    pi: QuadElem | None  # prime element of norm +-q when one exists
    pibar: QuadElem | None
    hnf: tuple[tuple[int, int], tuple[int, int]]  # prime ideal in {1, w} basis


def _norm_form_element(F: QuadField, q: int) -> QuadElem | None:
    """Search an integral element of norm q (imaginary) or +-q (real)."""
    D = F.D
    if D < 0:
        if D % 4 == 1:
            # (u + v sqrt(D))/2 with u = v mod 2, u^2 + |D| v^2 = 4q
            for v in range(isqrt(4 * q // -D) + 1):
                u2 = 4 * q + D * v * v
                if u2 < 0:
                    break
                if is_square(u2):
                    u = isqrt(u2)
                    if (u - v) % 2 == 0:
                        return QuadElem(F, Fraction(u, 2), Fraction(v, 2))
            return None
        for v in range(isqrt(q // -D) + 1):
            u2 = q + D * v * v
            if u2 < 0:
                break
            if is_square(u2):
                return F(isqrt(u2), v)
        return None
    # real field: bounded box scan for x^2 - D y^2 = +-q on integral elements
    for v in range(1000):
        for target in (q, -q):
            if D % 4 == 1:
                u2 = 4 * target + D * v * v
                if u2 >= 0 and is_square(u2):
                    u = isqrt(u2)
                    if (u - v) % 2 == 0:
                        return QuadElem(F, Fraction(u, 2), Fraction(v, 2))
            else:
                u2 = target + D * v * v
                if u2 >= 0 and is_square(u2):
                    return F(isqrt(u2), v)
    return None


def split_prime(F: QuadField, q: int) -> SplitResult:
    """Splitting behavior of the rational prime q in O_F.

    For split/ramified primes also tries to produce a prime element by a
    norm form search; the HNF rows of one prime ideal above q (in the
    {1, w} basis) are returned in every case.
    """
    if not is_prime(q):
        raise ValueError("split_prime needs a prime, got %d" % q)
    disc = F.disc
    if q == 2:
        if disc % 2 == 0:
            kind = "ramified"
        elif disc % 8 == 1:
            kind = "split"
        else:
            kind = "inert"
    else:
        j = jacobi(disc, q)
        kind = "split" if j == 1 else "inert" if j == -1 else "ramified"

    if kind == "inert":
        return SplitResult("inert", F(q), F(q), ((q, 0), (0, q)))

    # Kummer: root of the minimal polynomial of w mod q gives the ideal
    c0, c1, _ = F.omega_minpoly()
    r = next(x for x in range(q) if (x * x + c1 * x + c0) % q == 0)
    hnf = ((q, 0), ((-r) % q, 1))
    pi = _norm_form_element(F, q)
    pibar = pi.conj() if pi is not None else None
    return SplitResult(kind, pi, pibar, hnf)


# ---------------------------------------------------------------------------
# binary quadratic forms


@dataclass(frozen=True)
class BinaryForm:
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    def is_reduced(self) -> bool:
        # imaginary reduction: |b| <= a <= c, and b >= 0 when |b| = a or a = c
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def reduce(self) -> "BinaryForm":
        a, b, c = self.a, self.b, self.c
        if a <= 0 or self.disc >= 0:
            raise ValueError("reduction implemented for positive definite forms")
        while True:
            if c < a:
                a, b, c = c, -b, a
                continue
            if b > a or b <= -a:
                # translate b into (-a, a]
                k = (a - b) // (2 * a)
                b2 = b + 2 * k * a
                c = c + k * b + k * k * a
                b = b2
                continue
            break
        if (abs(b) == a or a == c) and b < 0:
            b = -b
        return BinaryForm(a, b, c)

    def eval(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def inverse(self) -> "BinaryForm":
        return BinaryForm(self.a, -self.b, self.c).reduce()


def principal_form(disc: int) -> BinaryForm:
    if disc % 4 == 0:
        return BinaryForm(1, 0, -disc // 4)
    if disc % 4 == 1:
        return BinaryForm(1, 1, (1 - disc) // 4)
    raise ValueError("discriminant must be 0 or 1 mod 4")


def reduced_forms(disc: int) -> list[BinaryForm]:
    """All reduced primitive positive definite forms of the discriminant."""
    if disc >= 0 or disc % 4 not in (0, 1):
        raise ValueError("need a negative discriminant = 0 or 1 mod 4")
    out = []
    b = disc % 2
    while 3 * b * b <= -disc:
        m = (b * b - disc) // 4
        a = max(b, 1)
        while a * a <= m:
            if m % a == 0:
                c = m // a
                f = BinaryForm(a, b, c)
                if f.is_primitive():
                    out.append(f)
                    if 0 < b < a < c:
                        out.append(BinaryForm(a, -b, c))
            a += 1
        b += 2
    return sorted(out, key=lambda f: (f.a, f.b, f.c))


def _transform(f: BinaryForm, x: int, y: int) -> BinaryForm:
    """Equivalent form whose leading coefficient is f(x, y), gcd(x, y) = 1."""
    g, s, t = xgcd(x, y)
    assert g == 1
    # unimodular matrix [[x, -t], [y, s]]
    a2 = f.eval(x, y)
    b2 = 2 * (f.a * x * -t + f.c * y * s) + f.b * (x * s - t * y)
    c2 = f.eval(-t, s)
    out = BinaryForm(a2, b2, c2)
    assert out.disc == f.disc
    return out


def compose(f1: BinaryForm, f2: BinaryForm) -> BinaryForm:
    """Dirichlet composition after steering f2 onto a leading coefficient
    coprime to 2*a1, then gluing concordant forms and reducing."""
    if f1.disc != f2.disc:
        raise ValueError("forms of different discriminants")
    disc = f1.disc
    # find coprime representative of f2
    target = 2 * f1.a
    found = None
    bound = 1
    while found is None:
        bound += 1
        for x in range(-bound, bound + 1):
            for y in range(-bound, bound + 1):
                if gcd(x, y) != 1:
                    continue
                v = f2.eval(x, y)
                if v > 0 and gcd(v, target) == 1:
                    found = (x, y)
                    break
            if found:
                break
    g2 = _transform(f2, *found)
    a1, a2 = f1.a, g2.a
    # B = b1 mod 2a1, B = b2 mod 2a2; moduli share only the factor 2 and
    # b1 = b2 = disc mod 2, so the system is solvable
    g, s, t = xgcd(2 * a1, 2 * a2)
    assert (g2.b - f1.b) % g == 0
    lcm = 2 * a1 * 2 * a2 // g
    B = (f1.b + 2 * a1 * ((g2.b - f1.b) // g) * s) % lcm
    assert (B - f1.b) % (2 * a1) == 0 and (B - g2.b) % (2 * a2) == 0
    C_num = B * B - disc
    assert C_num % (4 * a1 * a2) == 0
    return BinaryForm(a1 * a2, B, C_num // (4 * a1 * a2)).reduce()


def form_pow(f: BinaryForm, e: int) -> BinaryForm:
    ident = principal_form(f.disc).reduce()
    if e < 0:
        return form_pow(f.inverse(), -e)
    r = ident
    base = f
    while e:
        if e & 1:
            r = compose(r, base)
        base = compose(base, base)
        e >>= 1
    return r


@dataclass(frozen=True)
class ClassGroupResult:
    disc: int
    h: int
    forms: tuple[BinaryForm, ...]
    structure: tuple[int, ...]  # invariant factors d1 | d2 | ...


def _abelian_structure(elements, op, identity) -> tuple[int, ...]:
    """Invariant factors of a small abelian group given by a multiplication.

    Counts elements killed by p^k for each prime p; those counts pin down
    the partition of p-ranks, hence the structure.
    """
    n = len(elements)
    if n == 1:
        return ()
    from .intmath import factorize

    def power(g, e):
        r = identity
        base = g
        while e:
            if e & 1:
                r = op(r, base)
            base = op(base, base)
            e >>= 1
        return r

    # elementary divisors per prime
    per_prime: dict[int, list[int]] = {}
    for p, e in factorize(n).items():
        counts = [1]  # N_k = #{g : g^(p^k) = id}
        for k in range(1, e + 1):
            counts.append(sum(1 for g in elements if power(g, p**k) == identity))
        # N_k = p^(sum_i min(lambda_i, k)); recover the partition lambda
        exps = []
        for k in range(1, e + 1):
            v = 0
            c = counts[k] // counts[k - 1]
            while c > 1:
                c //= p
                v += 1
            exps.append(v)  # number of lambda_i >= k
        partition = []
        for k, cnt in enumerate(exps, start=1):
            nxt = exps[k] if k < len(exps) else 0
            partition.extend([k] * (cnt - nxt))
        per_prime[p] = sorted((p**x for x in partition), reverse=True)
    # glue into invariant factors
    depth = max(len(v) for v in per_prime.values())
    invs = []
    for i in range(depth):
        d = 1
        for p, divs in per_prime.items():
            if i < len(divs):
                d *= divs[i]
        invs.append(d)
    return tuple(sorted(invs))


def form_class_group(disc: int) -> ClassGroupResult:
    forms = reduced_forms(disc)
    ident = principal_form(disc).reduce()
    assert ident in forms
    structure = _abelian_structure(forms, compose, ident)
    return ClassGroupResult(disc, len(forms), tuple(forms), structure)


# ---------------------------------------------------------------------------
# continued fractions and Pell equations


@dataclass(frozen=True)
class CFExpansion:
    D: int
    a0: int
    period: tuple[int, ...]


def cf_sqrt(D: int) -> CFExpansion:
    """Periodic continued fraction of sqrt(D) via the exact P,Q recurrence."""
    if D <= 0 or is_square(D):
        raise ValueError("cf_sqrt needs a positive nonsquare")
    a0 = isqrt(D)
    m, d, a = 0, 1, a0
    period = []
    states = {}
    while True:
        m = d * a - m
        d = (D - m * m) // d
        a = (a0 + m) // d
        if (m, d) in states:
            break
        states[(m, d)] = len(period)
        period.append(a)
    return CFExpansion(D, a0, tuple(period))


def cf_convergents(D: int, count: int):
    """Yield the first `count` convergents (h_k, q_k) of sqrt(D)."""
    cf = cf_sqrt(D)

    def quotients():
        yield cf.a0
        while True:
            yield from cf.period

    h1, h2 = 1, 0  # h_{k-1}, h_{k-2}
    q1, q2 = 0, 1
    gen = quotients()
    for _ in range(count):
        a = next(gen)
        h = a * h1 + h2
        q = a * q1 + q2
        yield h, q
        h2, h1 = h1, h
        q2, q1 = q1, q


@dataclass(frozen=True)
class PellSolution:
    D: int
    N: int
    x: int
    y: int

    def __post_init__(self):
        assert self.x * self.x - self.D * self.y * self.y == self.N


@dataclass(frozen=True)
class PellResult:
    solution: PellSolution | None
    proven: bool  # for solution=None: True means proven unsolvable


def _cf_fundamental(D: int) -> tuple[int, int, int]:
    """(x, y, period length) with x^2 - D y^2 = (-1)^len(period)."""
    cf = cf_sqrt(D)
    quots = [cf.a0] + list(cf.period[:-1])
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    for q in quots:
        h_prev, h = h, q * h + h_prev
        k_prev, k = k, q * k + k_prev
    l = len(cf.period)
    assert h * h - D * k * k == (-1) ** l
    return h, k, l


def pell_solve(D: int, N: int, y_max: int = 10**5) -> PellResult:
    """Solve x^2 - D y^2 = N in positive integers.

    N = +-1 goes through the continued fraction of sqrt(D) and is decided
    exactly (fundamental solution, or proven-none for N = -1 with even
    period).  Other N fall back to a convergent scan plus a direct search
    over y <= y_max; a miss there is reported as unproven.
    """
    if D <= 0 or is_square(D):
        raise ValueError("pell_solve needs a positive nonsquare D")
    if N == 0:
        raise ValueError("N = 0 has no positive solutions")
    x0, y0, l = _cf_fundamental(D)
    if N == 1:
        if l % 2 == 0:
            return PellResult(PellSolution(D, 1, x0, y0), True)
        x1 = x0 * x0 + D * y0 * y0
        y1 = 2 * x0 * y0
        return PellResult(PellSolution(D, 1, x1, y1), True)
    if N == -1:
        if l % 2 == 1:
            return PellResult(PellSolution(D, -1, x0, y0), True)
        return PellResult(None, True)
    # general N: direct scan (smallest y first), then convergent backstop
    # for solutions whose y lies past the scan window
    for y in range(1, y_max + 1):
        x2 = N + D * y * y
        if x2 > 0 and is_square(x2):
            return PellResult(PellSolution(D, N, isqrt(x2), y), False)
    for h, q in cf_convergents(D, 2 * len(cf_sqrt(D).period) + 2):
        if h * h - D * q * q == N:
            return PellResult(PellSolution(D, N, h, q), False)
    return PellResult(None, False)
