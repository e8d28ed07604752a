"""Exact arithmetic in Z[phi], Q(phi) and the residue rings Z[phi]/(q).

phi is the positive root of x^2 = x + 1.  An element a + b*phi is stored as
the integer pair (a, b); products are rewritten with phi^2 = phi + 1, so the
pair is canonical.
"""

from math import gcd

from .errors import ArithmeticOverflow, DomainError

INT64_MAX = 2**63 - 1


def _checked(*values):
    for v in values:
        if v > INT64_MAX or v < -INT64_MAX - 1:
            raise ArithmeticOverflow(f"{v} does not fit in a signed 64-bit integer")
    return values


class GoldenInt:
    """An element a + b*phi of Z[phi]."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        a, b = int(a), int(b)
        _checked(a, b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    def __setattr__(self, name, value):
        raise AttributeError("GoldenInt is immutable")

    @classmethod
    def coerce(cls, x):
        if isinstance(x, GoldenInt):
            return x
        if isinstance(x, int):
            return cls(x, 0)
        return NotImplemented

    def __iter__(self):
        yield self.a
        yield self.b

    def __repr__(self):
        return f"GoldenInt({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}φ"
        sign = "+" if self.b > 0 else "-"
        return f"{self.a}{sign}{abs(self.b)}φ"

    def __eq__(self, other):
        other = GoldenInt.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __neg__(self):
        return GoldenInt(-self.a, -self.b)

    def __add__(self, other):
        other = GoldenInt.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GoldenInt(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other):
        other = GoldenInt.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GoldenInt(self.a - other.a, self.b - other.b)

    def __rsub__(self, other):
        other = GoldenInt.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = GoldenInt.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a1, b1, a2, b2 = self.a, self.b, other.a, other.b
        bb = b1 * b2
        return GoldenInt(a1 * a2 + bb, a1 * b2 + a2 * b1 + bb)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            raise DomainError("negative powers live in GoldenRat")
        result, base = GoldenInt(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self):
        """Galois conjugate: phi -> 1 - phi."""
        return GoldenInt(self.a + self.b, -self.b)

    def norm(self):
        return self.a * self.a + self.a * self.b - self.b * self.b

    def sign(self):
        return sign(self)

    def __lt__(self, other):
        return sign(self - other) < 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __float__(self):
        return self.a + self.b * PHI_FLOAT

    def content(self):
        return gcd(self.a, self.b)

    def divisible_by(self, n):
        return self.a % n == 0 and self.b % n == 0

    def mod(self, q):
        return ResidueElem(self.a, self.b, q)


PHI_FLOAT = (1 + 5**0.5) / 2
ZERO = GoldenInt(0, 0)
ONE = GoldenInt(1, 0)
PHI = GoldenInt(0, 1)


def conj_norm(x):
    """Return (conj(x), N(x)); x * conj(x) == N(x)."""
    return x.conj(), x.norm()


def sign(x):
    """Exact sign of a + b*phi, using integer comparisons only.

    a + b*phi = (u + b*sqrt5)/2 with u = 2a + b.
    """
    u, b = 2 * x.a + x.b, x.b
    if u >= 0 and b >= 0:
        return 0 if (u == 0 and b == 0) else 1
    if u <= 0 and b <= 0:
        return -1
    # opposite signs: compare u^2 against 5 b^2
    d = u * u - 5 * b * b
    if u > 0:
        return 1 if d > 0 else -1
    return 1 if d < 0 else -1


class GoldenRat:
    """An element num/den of Q(phi) with den > 0 and gcd(content(num), den) == 1."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num = GoldenInt.coerce(num)
        if num is NotImplemented:
            raise TypeError("numerator must be a GoldenInt or int")
        den = int(den)
        if den == 0:
            raise DomainError("zero denominator")
        if den < 0:
            num, den = -num, -den
        g = gcd(gcd(num.a, num.b), den)
        if g > 1:
            num = GoldenInt(num.a // g, num.b // g)
            den //= g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("GoldenRat is immutable")

    @classmethod
    def coerce(cls, x):
        if isinstance(x, GoldenRat):
            return x
        if isinstance(x, (GoldenInt, int)):
            return cls(x, 1)
        return NotImplemented

    def __repr__(self):
        return f"GoldenRat({self.num!r}, {self.den})"

    def __str__(self):
        return str(self.num) if self.den == 1 else f"({self.num})/{self.den}"

    def __eq__(self, other):
        other = GoldenRat.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        if self.den == 1:
            return hash(self.num)
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def __neg__(self):
        return GoldenRat(-self.num, self.den)

    def __add__(self, other):
        other = GoldenRat.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return GoldenRat(self.num + other.num, self.den)
        return GoldenRat(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = GoldenRat.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = GoldenRat.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = GoldenRat.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return GoldenRat(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise DomainError("division by zero in Q(phi)")
        c, n = conj_norm(self.num)
        # 1/(x/d) = d*conj(x)/N(x)
        return GoldenRat(c * self.den, n)

    def __truediv__(self, other):
        other = GoldenRat.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = GoldenRat.coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def sign(self):
        return sign(self.num)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __float__(self):
        return float(self.num) / self.den

    def conj(self):
        return GoldenRat(self.num.conj(), self.den)

    def is_integral(self):
        return self.den == 1


class ResidueElem:
    """An element a + b*phi of (Z/q)[x]/(x^2 - x - 1)."""

    __slots__ = ("a", "b", "q")

    def __init__(self, a, b, q):
        if q < 2:
            raise DomainError(f"modulus must be >= 2, got {q}")
        object.__setattr__(self, "q", int(q))
        object.__setattr__(self, "a", int(a) % q)
        object.__setattr__(self, "b", int(b) % q)

    def __setattr__(self, name, value):
        raise AttributeError("ResidueElem is immutable")

    def _same_ring(self, other):
        if isinstance(other, int):
            return ResidueElem(other, 0, self.q)
        if isinstance(other, GoldenInt):
            return ResidueElem(other.a, other.b, self.q)
        if not isinstance(other, ResidueElem):
            return NotImplemented
        if other.q != self.q:
            raise DomainError(f"moduli differ: {self.q} vs {other.q}")
        return other

    def __repr__(self):
        return f"ResidueElem({self.a}, {self.b}, q={self.q})"

    def __eq__(self, other):
        other = self._same_ring(other)
        if other is NotImplemented:
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b, self.q))

    def __add__(self, other):
        other = self._same_ring(other)
        if other is NotImplemented:
            return NotImplemented
        return ResidueElem(self.a + other.a, self.b + other.b, self.q)

    __radd__ = __add__

    def __neg__(self):
        return ResidueElem(-self.a, -self.b, self.q)

    def __sub__(self, other):
        other = self._same_ring(other)
        if other is NotImplemented:
            return NotImplemented
        return ResidueElem(self.a - other.a, self.b - other.b, self.q)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._same_ring(other)
        if other is NotImplemented:
            return NotImplemented
        bb = self.b * other.b
        return ResidueElem(self.a * other.a + bb, self.a * other.b + other.a * self.b + bb, self.q)

    __rmul__ = __mul__

    def lift(self):
        return GoldenInt(self.a, self.b)


def reduce_mod(x, q):
    """Componentwise reduction Z[phi] -> Z[phi]/(q)."""
    if q < 2:
        raise DomainError(f"modulus must be >= 2, got {q}")
    return ResidueElem(x.a, x.b, q)


# ---- operation-style entry points ----------------------------------------------

_OPS = {"add": lambda x, y: x + y, "sub": lambda x, y: x - y, "mul": lambda x, y: x * y}


def gi_arith(x, y, op):
    if op not in _OPS:
        raise DomainError(f"unknown operation {op!r}")
    return _OPS[op](GoldenInt.coerce(x), GoldenInt.coerce(y))


def gq_arith(x, y, op):
    x, y = GoldenRat.coerce(x), GoldenRat.coerce(y)
    if op == "div":
        return x / y
    if op not in _OPS:
        raise DomainError(f"unknown operation {op!r}")
    return _OPS[op](x, y)


gi_conj_norm = conj_norm
gi_sign = sign
res_reduce = reduce_mod
