"""Representation censuses for l(x, y) = Axy + Bx + Cy and F(x, y, z) = xyz + x + y + z.

The bilinear form factors after scaling: A*l(x, y) + BC = (Ax + C)(Ay + B),
so n is represented exactly when An + BC splits as d*e with d = C and
e = B (mod A) and both factors above the domain's lower bounds.
"""

import csv
import io
from dataclasses import dataclass, field
from math import gcd, isqrt

import numpy as np

from .errors import DomainError, ResourceLimitError

DOMAIN_NONNEG = 0  # x, y >= 0
DOMAIN_POS = 1  # x, y >= 1
QUAD_BUDGET = 10**8
CUBIC_BUDGET = 10**7


# ---- elementary number theory ------------------------------------------------


def factorize(n):
    """{prime: exponent} by trial division."""
    if n < 1:
        raise DomainError("factorize needs n >= 1")
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def totient(n):
    if n < 1:
        raise DomainError("totient needs n >= 1")
    result = n
    for p in factorize(n):
        result = result // p * (p - 1)
    return result


def lpf_table(N):
    """Least prime factor of every 0 <= n <= N (lpf[0] = lpf[1] = 0)."""
    lpf = np.zeros(N + 1, dtype=np.int64)
    for p in range(2, isqrt(N) + 1):
        if lpf[p] == 0:
            block = lpf[p * p :: p]
            block[block == 0] = p
    idx = np.flatnonzero(lpf == 0)
    idx = idx[idx >= 2]
    lpf[idx] = idx
    return lpf


def prime_mask(N):
    lpf = lpf_table(N)
    return (lpf == np.arange(N + 1)) & (np.arange(N + 1) >= 2)


def is_prime(n):
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % p for p in range(3, isqrt(n) + 1, 2))


def divisors(n):
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


# ---- bilinear forms ------------------------------------------------------------


@dataclass(frozen=True)
class QuadraticForm:
    A: int
    B: int
    C: int

    def __post_init__(self):
        if self.A < 1 or self.B < 0 or self.C < 0:
            raise DomainError("need A >= 1 and B, C >= 0")
        if gcd(self.A, self.B) != 1:
            raise DomainError(f"gcd(A, B) = gcd({self.A}, {self.B}) != 1")

    def __call__(self, x, y):
        return self.A * x * y + self.B * x + self.C * y

    def identity_holds(self, x, y):
        return self.A * self(x, y) + self.B * self.C == (self.A * x + self.C) * (self.A * y + self.B)


def quad_represents(form, n, domain=DOMAIN_POS):
    """(represented, witness) with witness (x, y) or None, via the divisors of An + BC."""
    if n < 0:
        raise DomainError("n must be >= 0")
    A, B, C = form.A, form.B, form.C
    lo = domain
    N = A * n + B * C
    if N == 0:
        # only l(0, 0) = 0 can reach zero
        return (True, (0, 0)) if lo == 0 else (False, None)
    for d in divisors(N):
        if (d - C) % A or d < A * lo + C:
            continue
        e = N // d
        if (e - B) % A or e < A * lo + B:
            continue
        x, y = (d - C) // A, (e - B) // A
        if form(x, y) == n:
            return True, (x, y)
    return False, None


def quad_represents_bruteforce(form, n, domain=DOMAIN_POS):
    """Direct double loop over x, y; the oracle for quad_represents."""
    for x in range(domain, n + 1):
        if form(x, domain) > n:
            break
        for y in range(domain, n + 1):
            v = form(x, y)
            if v == n:
                return True, (x, y)
            if v > n or form(x, y + 1) == v:
                break
    return n == 0 and domain == 0, ((0, 0) if n == 0 and domain == 0 else None)


def quad_values_bruteforce(form, X, domain=DOMAIN_POS):
    """Set of values l(x, y) <= X by a plain double loop (census oracle)."""
    values = set()
    x = domain
    while True:
        if form(x, domain) > X and (form.A * domain + form.B) > 0:
            break
        if x > X + 1:
            break
        y = domain
        while True:
            v = form(x, y)
            if v > X:
                break
            values.add(v)
            if form(x, y + 1) == v:
                break
            y += 1
        x += 1
    return values


@dataclass(frozen=True, eq=False)
class QuadCensus:
    form: QuadraticForm
    X: int
    domain: int
    represented: np.ndarray  # bool, index n in [0, X]
    witness_x: np.ndarray  # smallest x reaching n, -1 if none

    @property
    def unrepresented(self):
        return np.flatnonzero(~self.represented[1:]) + 1

    @property
    def count(self):
        return int(self.X - self.represented[1:].sum())

    @property
    def fraction(self):
        return self.count / self.X if self.X else 0.0

    def witness(self, n):
        x = int(self.witness_x[n])
        if x < 0:
            return None
        step = self.form.A * x + self.form.C
        if step == 0:
            return (x, self.domain)
        return (x, (n - self.form.B * x) // step)

    def to_csv(self, start=0):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "represented", "witness_x", "witness_y"])
        for n in range(start, self.X + 1):
            wit = self.witness(n)
            w.writerow([n, int(self.represented[n]), *(wit if wit else ("", ""))])
        return buf.getvalue()


def quad_unrepresented_census(form, X, domain=DOMAIN_POS, budget=QUAD_BUDGET):
    """Mark every value l(x, y) <= X by striding over y for each x."""
    if X < 0:
        raise DomainError("X must be >= 0")
    if X > budget:
        raise ResourceLimitError(f"X = {X} exceeds budget {budget}")
    A, B, C = form.A, form.B, form.C
    rep = np.zeros(X + 1, dtype=bool)
    wx = np.full(X + 1, -1, dtype=np.int64)
    lo = domain
    grow = A * lo + B  # increase of l(x, lo) per unit of x
    x_max = (X - C * lo) // grow if grow else max((X - C) // A + 1, lo)
    for x in range(lo, x_max + 1):
        base = form(x, lo)
        if base > X:
            break
        step = A * x + C
        if not step:
            step = X + 1
        sl = slice(base, X + 1, step)
        fresh = ~rep[sl]
        wx[sl][fresh] = x
        rep[sl] = True
    return QuadCensus(form, X, domain, rep, wx)


def rough_count(A, B, X, budget=QUAD_BUDGET):
    """#{1 <= n <= X : no prime factor p of n has p = B (mod A)}."""
    if A < 1 or gcd(A, B) != 1:
        raise DomainError(f"need gcd(A, B) = 1, got A={A}, B={B}")
    if X > budget:
        raise ResourceLimitError(f"X = {X} exceeds budget {budget}")
    if X < 1:
        return 0
    lpf = lpf_table(X)
    primes = np.flatnonzero((lpf == np.arange(X + 1)) & (np.arange(X + 1) >= 2))
    bad = np.zeros(X + 1, dtype=bool)
    for p in primes[primes % A == B % A]:
        bad[p::p] = True
    return int(X - bad[1:].sum())


def rough_count_bruteforce(A, B, X):
    return sum(1 for n in range(1, X + 1) if all(p % A != B % A for p in factorize(n)))


# ---- ternary cubic -------------------------------------------------------------


def cubic_value(x, y, z):
    return x * y * z + x + y + z


@dataclass(frozen=True, eq=False)
class GapCensus:
    """Values of F(x, y, z) = xyz + x + y + z with x, y, z >= 1 missed up to X.

    unrepresented[k] lists the n in [1, X] not of the form F with z <= k.
    """

    X: int
    layers: int
    unrepresented: dict
    checks: dict = field(default_factory=dict)

    def counts(self):
        return {k: len(v) for k, v in self.unrepresented.items()}


def cubic_layer_census(X, layers=3, budget=CUBIC_BUDGET):
    if X < 1:
        raise DomainError("X must be >= 1")
    if X > budget:
        raise ResourceLimitError(f"X = {X} exceeds budget {budget}")
    if layers < 1:
        raise DomainError("layers must be >= 1")
    rep = np.zeros(X + 1, dtype=bool)
    out = {}
    for z in range(1, layers + 1):
        # F = z x y + x + y + z: start at y = 1, stride z x + 1 in y
        x = 1
        while True:
            base = cubic_value(x, 1, z)
            if base > X:
                break
            rep[base :: z * x + 1] = True
            x += 1
        out[z] = np.flatnonzero(~rep[1:]) + 1
    census = GapCensus(X, layers, out)
    census.checks.update(cubic_characterization_checks(census))
    return census


def _layer3_has_factor(p):
    """3p - 8 = (3x + 1)(3y + 1) with x, y >= 1."""
    m = 3 * p - 8
    for d in range(4, isqrt(max(m, 0)) + 1, 3):
        if m % d == 0 and m // d >= 4:
            return True
    return False


def cubic_layer_oracles(X):
    """Divisor characterizations of the first three layers as Python sets."""
    primes = {int(p) for p in np.flatnonzero(prime_mask(X))}
    layer1 = {1} | primes
    layer2 = {n for n in layer1 if n == 1 or 2 * n - 3 < 9 or is_prime(2 * n - 3)}
    layer3 = {n for n in layer2 if n == 1 or not _layer3_has_factor(n)}
    return {1: layer1, 2: layer2, 3: layer3}


def _stated_layer3(layer2):
    """Members p of layer 2 with 3p - 8 prime = 1 (mod 3) or a product of two primes = 2 (mod 3)."""
    out = set()
    for p in layer2:
        m = 3 * p - 8
        if m < 2:
            continue
        f = factorize(m)
        primes = [q for q, e in f.items() for _ in range(e)]
        if len(primes) == 1 and primes[0] % 3 == 1:
            out.add(p)
        elif len(primes) == 2 and all(q % 3 == 2 for q in primes):
            out.add(p)
    return out


def cubic_characterization_checks(census):
    oracles = cubic_layer_oracles(census.X)
    checks = {}
    sets = {k: set(int(n) for n in v) for k, v in census.unrepresented.items()}
    for k in sorted(sets):
        if k in oracles:
            checks[f"layer{k}_equals_oracle"] = sets[k] == oracles[k]
        if k > 1:
            checks[f"layer{k}_nested"] = sets[k] <= sets[k - 1]
    if 3 in sets:
        diff = sets[3] ^ _stated_layer3(sets[2])
        checks["layer3_stated_description_symdiff"] = sorted(diff)
    return checks
