"""2x2 matrices over Z[phi] / Q(phi) and the Hecke-5 semigroup generators."""

from dataclasses import dataclass

from .errors import IdentityFailure, InvariantViolation
from .golden import GoldenInt, GoldenRat, ONE, PHI, ZERO


@dataclass(frozen=True)
class GMat:
    """[[e11, e12], [e21, e22]] with GoldenInt or GoldenRat entries."""

    e11: object
    e12: object
    e21: object
    e22: object

    @classmethod
    def of(cls, rows):
        (p, q), (r, s) = rows
        return cls(*(_as_golden(x) for x in (p, q, r, s)))

    def rows(self):
        return ((self.e11, self.e12), (self.e21, self.e22))

    def __matmul__(self, other):
        if isinstance(other, GMat):
            return GMat(
                self.e11 * other.e11 + self.e12 * other.e21,
                self.e11 * other.e12 + self.e12 * other.e22,
                self.e21 * other.e11 + self.e22 * other.e21,
                self.e21 * other.e12 + self.e22 * other.e22,
            )
        x, y = other
        return (self.e11 * x + self.e12 * y, self.e21 * x + self.e22 * y)

    def __add__(self, other):
        return GMat(self.e11 + other.e11, self.e12 + other.e12, self.e21 + other.e21, self.e22 + other.e22)

    def __sub__(self, other):
        return GMat(self.e11 - other.e11, self.e12 - other.e12, self.e21 - other.e21, self.e22 - other.e22)

    def __neg__(self):
        return GMat(-self.e11, -self.e12, -self.e21, -self.e22)

    def scale(self, c):
        return GMat(c * self.e11, c * self.e12, c * self.e21, c * self.e22)

    def __rmul__(self, c):
        return self.scale(c)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result, base = identity(), self
        while n:
            if n & 1:
                result = result @ base
            base = base @ base
            n >>= 1
        return result

    def det(self):
        return self.e11 * self.e22 - self.e12 * self.e21

    def transpose(self):
        return GMat(self.e11, self.e21, self.e12, self.e22)

    @property
    def T(self):
        return self.transpose()

    def inverse(self):
        d = self.det()
        if d == 1:
            return GMat(self.e22, -self.e12, -self.e21, self.e11)
        inv = GoldenRat.coerce(1) / GoldenRat.coerce(d)
        return GMat(self.e22, -self.e12, -self.e21, self.e11).scale(inv)

    def entries(self):
        return (self.e11, self.e12, self.e21, self.e22)

    def __eq__(self, other):
        if not isinstance(other, GMat):
            return NotImplemented
        return all(x == y for x, y in zip(self.entries(), other.entries()))

    def __hash__(self):
        return hash(self.entries())

    def congruent(self, other, n):
        """Entrywise congruence mod n in Z[phi]; both matrices must be integral."""
        for x, y in zip(self.entries(), other.entries()):
            diff = _as_int_golden(x - y)
            if not diff.divisible_by(n):
                return False
        return True

    def __str__(self):
        return "[[{}, {}], [{}, {}]]".format(*self.entries())


def _as_golden(x):
    if isinstance(x, (GoldenInt, GoldenRat)):
        return x
    if isinstance(x, int):
        return GoldenInt(x)
    if isinstance(x, tuple):
        return GoldenInt(*x)
    raise TypeError(f"cannot use {x!r} as a matrix entry")


def _as_int_golden(x):
    if isinstance(x, GoldenInt):
        return x
    if isinstance(x, GoldenRat) and x.den == 1:
        return x.num
    raise ValueError(f"{x} is not in Z[phi]")


def identity():
    return GMat(ONE, ZERO, ZERO, ONE)


A = GMat(ONE, PHI, ZERO, ONE)
B = GMat(ONE, ZERO, PHI, ONE)
C = GMat(PHI, PHI, ONE, PHI)
D = GMat(PHI, ONE, PHI, PHI)
GENERATORS = {"A": A, "B": B, "C": C, "D": D}

# Linear action of each generator on quadruples (a, b, c, d) <-> (a+b phi, c+d phi).
# Multiplication by phi sends (p, q) to (q, p + q).
QUAD_ACTION = {
    "A": ((1, 0, 0, 1), (0, 1, 1, 1), (0, 0, 1, 0), (0, 0, 0, 1)),
    "B": ((1, 0, 0, 0), (0, 1, 0, 0), (0, 1, 1, 0), (1, 1, 0, 1)),
    "C": ((0, 1, 0, 1), (1, 1, 1, 1), (1, 0, 0, 1), (0, 1, 1, 1)),
    "D": ((0, 1, 1, 0), (1, 1, 0, 1), (0, 1, 0, 1), (1, 1, 1, 1)),
}


def quad_action_from_matrix(M):
    """Derive the 4x4 integer action of an integral GMat on (a, b, c, d)."""
    cols = []
    for basis in ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)):
        cols.append(mat_apply(M, basis, check=False))
    return tuple(tuple(col[i] for col in cols) for i in range(4))


def mat_apply(M, v, check=True):
    """Apply M to the quadruple v = (a, b, c, d) and return the image quadruple."""
    a, b, c, d = v
    x, y = M @ (GoldenInt(a, b), GoldenInt(c, d))
    x, y = _as_int_golden(x), _as_int_golden(y)
    out = (x.a, x.b, y.a, y.b)
    if check and min(out) < 0:
        raise InvariantViolation(f"negative component in {out} = M·{v}")
    return out


def word(w):
    """Product of generators named by the string w, e.g. 'ABBC'."""
    M = identity()
    for ch in w:
        M = M @ GENERATORS[ch]
    return M


def trilinear_bottom_row(m, n, k):
    """Bottom row of B^m A^n B^k as the quadruple (mnk, 2mnk+m+k, mn+1, mn)."""
    if min(m, n, k) < 0:
        raise ValueError("exponents must be nonnegative")
    mnk = m * n * k
    GoldenInt(mnk, 2 * mnk + m + k)  # overflow guard
    return (mnk, 2 * mnk + m + k, m * n + 1, m * n)


def trilinear_bottom_row_product(m, n, k):
    """The same bottom row computed by explicit matrix multiplication."""
    M = (B**m) @ (A**n) @ (B**k)
    x, y = M.e21, M.e22
    return (x.a, x.b, y.a, y.b)


# ---- displayed identities -------------------------------------------------

def _m(rows):
    return GMat.of(rows)


def _rat(a, b, den):
    return GoldenRat(GoldenInt(a, b), den)


def displayed_identities():
    """Evaluate every displayed matrix identity; returns {name: (lhs, rhs, ok)}."""
    out = {}

    def record(name, lhs, rhs):
        out[name] = (lhs, rhs, lhs == rhs)

    Ainv, Binv = A.inverse(), B.inverse()
    quarter = GMat(GoldenRat(1), _rat(0, 1, 4), GoldenRat(0), GoldenRat(1))
    M = A @ B @ Ainv @ Binv @ quarter
    M_expected = GMat(_rat(4, 4, 1), GoldenRat(0), _rat(1, 2, 1), _rat(2, -1, 4))
    record("M_product", M, M_expected)
    record("M_conjugation_48_80phi", M.inverse() @ B @ M, _m(((1, 0), ((48, 80), 1))))

    b = _m(((0, (0, 1)), (0, 0)))
    d = _m(((0, 0), ((0, 1), 0)))
    g = B @ b @ Binv
    h = C @ b @ C.inverse()
    i = D @ b @ D.inverse()
    record("adjoint_g", g, _m((((-1, -1), (0, 1)), ((-1, -2), (1, 1)))))
    record("adjoint_h", h, _m((((-1, -1), (1, 2)), ((0, -1), (1, 1)))))
    record("adjoint_i", i, _m((((-1, -2), (1, 2)), ((-1, -2), (1, 2)))))

    j = g + h - i - b + d
    k = h - b.scale(2) + d - j
    l = g - b + d.scale(2) - j
    record("eq_j", j, _m(((-1, 0), (0, 1))))
    record("eq_k", k, _m((((0, -1), 1), (0, (0, 1)))))
    record("eq_l", l, _m((((0, -1), 0), (-1, (0, 1)))))
    m_ = k - l.T
    record("eq_m", m_, _m(((0, 2), (0, 0))))
    record("eq_n", m_ - k.scale(2), _m((((0, 2), 0), (0, (0, -2)))))

    phi2 = PHI * PHI
    diag = GMat(phi2, ZERO, ZERO, -phi2)
    for mm in (1, 2, 3):
        for nn in (1, 2, 3):
            P, Q = A ** (2**mm), B ** (2**nn)
            comm = P @ Q @ P.inverse() @ Q.inverse()
            target = identity() + diag.scale(2 ** (mm + nn))
            modulus = 2 ** (mm + nn + min(mm, nn))
            ok = comm.congruent(target, modulus)
            out[f"commutator_m{mm}_n{nn}_mod{modulus}"] = (comm, target, ok)
    return out


def verify_paper_identities():
    """Check all identities exactly; raise IdentityFailure naming any mismatch."""
    results = displayed_identities()
    failed = [name for name, (_, _, ok) in results.items() if not ok]
    if failed:
        detail = "; ".join(f"{n}: got {results[n][0]}, expected {results[n][1]}" for n in failed)
        raise IdentityFailure(f"identity check failed: {detail}")
    return {name: ok for name, (_, _, ok) in results.items()}
