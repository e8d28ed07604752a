"""Reductions of the Hecke-5 group mod q.

A 2x2 matrix over R_q = (Z/q)[x]/(x^2 - x - 1) is stored as eight residue
digits (a11, b11, a12, b12, a21, b21, a22, b22), entry e = a + b*phi.
Sets of matrices are numpy arrays of shape (N, 8) keyed by the integer
sum(digit_i * q^(7-i)), which is the row-major byte order of the entries.
"""

import logging
from dataclasses import dataclass
from functools import reduce
from itertools import product
from math import gcd

import numpy as np

from .errors import DomainError, ResourceLimitError, TheoremCheckError
from .golden import ResidueElem
from .hecke import GENERATORS, QUAD_ACTION
from .sieve import factorize

log = logging.getLogger(__name__)

CLOSURE_BUDGET = 10**8
GEN_ORDER = ("A", "B", "C", "D")


def _gen_digits(name):
    m = GENERATORS[name]
    return tuple(x for e in m.entries() for x in (e.a, e.b))


GEN_DIGITS = {g: _gen_digits(g) for g in GEN_ORDER}
IDENTITY_DIGITS = (1, 0, 0, 0, 0, 0, 1, 0)


# ---- residue matrices ----------------------------------------------------------


@dataclass(frozen=True)
class ResidueMat:
    e11: ResidueElem
    e12: ResidueElem
    e21: ResidueElem
    e22: ResidueElem

    @classmethod
    def from_digits(cls, digits, q):
        d = list(digits)
        return cls(*(ResidueElem(d[2 * i], d[2 * i + 1], q) for i in range(4)))

    @classmethod
    def from_gmat(cls, m, q):
        return cls(*(e.mod(q) for e in m.entries()))

    @property
    def q(self):
        return self.e11.q

    def __matmul__(self, o):
        return ResidueMat(
            self.e11 * o.e11 + self.e12 * o.e21,
            self.e11 * o.e12 + self.e12 * o.e22,
            self.e21 * o.e11 + self.e22 * o.e21,
            self.e21 * o.e12 + self.e22 * o.e22,
        )

    def det(self):
        return self.e11 * self.e22 - self.e12 * self.e21

    def digits(self):
        return tuple(x for e in (self.e11, self.e12, self.e21, self.e22) for x in (e.a, e.b))

    def key(self):
        """Fixed byte serialization: entries row-major, each as (a, b) mod q."""
        width = max(1, (self.q - 1).bit_length() + 7) // 8
        return b"".join(int(x).to_bytes(width, "big") for x in self.digits())


def _ring_mul(a1, b1, a2, b2, q):
    bb = b1 * b2
    return (a1 * a2 + bb) % q, (a1 * b2 + a2 * b1 + bb) % q


def mat_mul(X, Y, q):
    """Row-wise product of (N, 8) digit arrays X and Y (Y may be one row)."""
    X = np.asarray(X, dtype=np.int64)
    Y = np.broadcast_to(np.asarray(Y, dtype=np.int64), X.shape) if np.ndim(Y) == 1 else np.asarray(Y, dtype=np.int64)
    E = [(X[:, 2 * i], X[:, 2 * i + 1]) for i in range(4)]
    F = [(Y[:, 2 * i], Y[:, 2 * i + 1]) for i in range(4)]
    out = []
    for (r, c) in ((0, 0), (0, 1), (1, 0), (1, 1)):
        p = _ring_mul(*E[2 * r], *F[c], q)
        s = _ring_mul(*E[2 * r + 1], *F[2 + c], q)
        out += [(p[0] + s[0]) % q, (p[1] + s[1]) % q]
    return np.stack(out, axis=1)


def mat_inverse_sl2(X, q):
    """Inverse of determinant-one matrices: [[d, -b], [-c, a]]."""
    X = np.asarray(X, dtype=np.int64)
    return np.stack([X[:, 6], X[:, 7], -X[:, 2] % q, -X[:, 3] % q, -X[:, 4] % q, -X[:, 5] % q, X[:, 0], X[:, 1]], axis=1) % q


def mat_det(X, q):
    X = np.asarray(X, dtype=np.int64)
    p = _ring_mul(X[:, 0], X[:, 1], X[:, 6], X[:, 7], q)
    s = _ring_mul(X[:, 2], X[:, 3], X[:, 4], X[:, 5], q)
    return (p[0] - s[0]) % q, (p[1] - s[1]) % q


def _weights(q):
    if q ** 8 >= 2**63:
        raise DomainError(f"modulus {q} too large for 64-bit matrix keys")
    return q ** np.arange(7, -1, -1, dtype=np.int64)


def matrix_keys(X, q):
    return np.asarray(X, dtype=np.int64) @ _weights(q)


def keys_to_digits(keys, q):
    keys = np.asarray(keys, dtype=np.int64)
    return np.stack([(keys // w) % q for w in _weights(q)], axis=1)


# ---- group closure -------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteGroupClosure:
    q: int
    keys: np.ndarray  # sorted int64 keys of the elements
    generators: tuple

    @property
    def order(self):
        return len(self.keys)

    def elements(self):
        return keys_to_digits(self.keys, self.q)

    def __contains__(self, m):
        digits = m.digits() if isinstance(m, ResidueMat) else tuple(m)
        k = int(np.asarray(digits, dtype=np.int64) @ _weights(self.q))
        i = np.searchsorted(self.keys, k)
        return i < len(self.keys) and self.keys[i] == k

    def is_closed(self):
        elems = self.elements()
        for g in self.generators:
            prod = matrix_keys(mat_mul(elems, GEN_DIGITS[g], self.q), self.q)
            if not np.all(np.isin(prod, self.keys, assume_unique=False)):
                return False
        return True


def group_closure_order(q, threads=1, budget=CLOSURE_BUDGET, generators=GEN_ORDER):
    """Gamma(mod q): closure of the identity under right multiplication by A, B, C, D.

    Right multiplication by invertible elements in a finite group reaches
    exactly the generated subgroup, so the semigroup and group reductions
    agree.  Raises ResourceLimitError when the ambient order (an upper bound)
    exceeds `budget`, or when the closure itself grows past it.
    """
    if q < 2:
        raise DomainError(f"modulus must be >= 2, got {q}")
    if ambient_order(q) > budget:
        raise ResourceLimitError(
            f"Gamma(mod {q}) may have up to {ambient_order(q)} elements (budget {budget})",
            progress={"q": q, "ambient_order": ambient_order(q)},
        )
    w = _weights(q)
    frontier = np.array([IDENTITY_DIGITS], dtype=np.int64) % q
    seen = frontier @ w
    gens = [np.array(GEN_DIGITS[g], dtype=np.int64) % q for g in generators]

    def expand(chunk):
        return np.concatenate([mat_mul(chunk, g, q) for g in gens])

    pool = None
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        pool = ThreadPoolExecutor(threads)
    try:
        while len(frontier):
            if pool is not None and len(frontier) >= 4 * threads:
                children = np.concatenate(list(pool.map(expand, np.array_split(frontier, threads))))
            else:
                children = expand(frontier)
            keys, idx = np.unique(children @ w, return_index=True)
            new = ~np.isin(keys, seen, assume_unique=True)
            frontier = children[idx[new]]
            seen = np.union1d(seen, keys[new])
            if len(seen) > budget:
                raise ResourceLimitError(f"closure mod {q} exceeded {budget} elements", progress={"elements": len(seen)})
    finally:
        if pool is not None:
            pool.shutdown()
    return FiniteGroupClosure(q, seen, tuple(generators))


# ---- ambient orders ------------------------------------------------------------


def brute_force_sl2_order(q):
    """|SL_2(R_q)| by enumerating every matrix; feasible for q <= 5."""
    if q < 2:
        raise DomainError(f"modulus must be >= 2, got {q}")
    if q > 6:
        raise ResourceLimitError(f"brute-force enumeration mod {q} is too large")
    ring = np.array(list(product(range(q), repeat=2)), dtype=np.int64)  # (q^2, 2)
    n = len(ring)
    # ad - bc = 1: tabulate products, then count pairs (ad, bc) differing by 1
    i, j = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    pa, pb = _ring_mul(ring[i, 0], ring[i, 1], ring[j, 0], ring[j, 1], q)
    prod_code = (pa * q + pb).ravel()
    counts = np.bincount(prod_code, minlength=n)
    total = 0
    for code in range(n):
        a, b = divmod(code, q)
        target = ((a - 1) % q) * q + b  # bc = ad - 1
        total += int(counts[code]) * int(counts[target])
    return total


def is_split(p):
    """5 is a nonzero square mod p, i.e. p = +-1 mod 5."""
    return p % 5 in (1, 4)


def _prime_ambient(p):
    if p in (2, 5):
        return brute_force_sl2_order(p)
    if not is_split(p):
        return p**2 * (p**2 - 1) * (p**2 + 1)
    return p**2 * (p - 1) ** 2 * (p + 1) ** 2


def ambient_order(q):
    """|SL_2(R_q)|: prime formulas, kernel |R/p|^3 = p^6 per extra power of p, CRT across primes."""
    if q < 2:
        raise DomainError(f"modulus must be >= 2, got {q}")
    total = 1
    for p, e in factorize(q).items():
        total *= _prime_ambient(p) * p ** (6 * (e - 1))
    return total


# ---- theorem checks ------------------------------------------------------------


def gamma_report(q, closure=None, threads=1):
    closure = closure or group_closure_order(q, threads=threads)
    amb = ambient_order(q)
    if amb % closure.order:
        raise TheoremCheckError(f"|Gamma(mod {q})| = {closure.order} does not divide {amb}")
    return {"q": q, "gamma_order": closure.order, "ambient_order": amb, "index": amb // closure.order}


def index_and_multiplicativity(qs=(6, 10, 12, 15, 20), primes=(5, 7, 11, 13), threads=1, raise_on_failure=True):
    """Index 72 at q = 12, |Gamma(q)| multiplicative over prime powers, and surjectivity mod p."""
    orders = {}

    def order(m):
        if m not in orders:
            orders[m] = group_closure_order(m, threads=threads).order
        return orders[m]

    checks = {}
    for p in primes:
        checks[f"surjective_mod_{p}"] = (order(p), ambient_order(p))
    if 12 in qs:
        checks["index_mod_12"] = (ambient_order(12) // order(12), 72)
    for q in qs:
        parts = [p**e for p, e in factorize(q).items()]
        checks[f"multiplicative_mod_{q}"] = (order(q), reduce(lambda x, y: x * y, (order(m) for m in parts), 1))
    report = {"orders": dict(sorted(orders.items())), "checks": {}}
    failed = []
    for name, (got, want) in checks.items():
        report["checks"][name] = {"got": got, "expected": want, "ok": got == want}
        if got != want:
            failed.append(f"{name}: {got} != {want}")
    if failed and raise_on_failure:
        raise TheoremCheckError("; ".join(failed))
    return report


def _tree_representatives(q_small, q_big, budget=CLOSURE_BUDGET):
    """BFS over Gamma(mod q_small) keeping, per element, one lift mod q_big.

    Returns (keys mod q_small sorted, lifts mod q_big aligned with keys).
    """
    w = _weights(q_small)
    gens = [np.array(GEN_DIGITS[g], dtype=np.int64) % q_big for g in GEN_ORDER]
    frontier = np.array([IDENTITY_DIGITS], dtype=np.int64)
    all_keys = [frontier @ w]
    all_lifts = [frontier]
    seen = all_keys[0]
    while len(frontier):
        children = np.concatenate([mat_mul(frontier, g, q_big) for g in gens])
        keys, idx = np.unique((children % q_small) @ w, return_index=True)
        new = ~np.isin(keys, seen, assume_unique=True)
        frontier = children[idx[new]]
        seen = np.union1d(seen, keys[new])
        all_keys.append(keys[new])
        all_lifts.append(frontier)
        if len(seen) > budget:
            raise ResourceLimitError(f"closure mod {q_small} exceeded {budget} elements")
    keys = np.concatenate(all_keys)
    lifts = np.concatenate(all_lifts)
    order = np.argsort(keys)
    return keys[order], lifts[order]


def _rank_mod_p(rows, p):
    """Rank over F_p of an integer matrix (rows reduced mod p)."""
    basis = []  # list of (pivot, row)
    for r in np.unique(np.asarray(rows, dtype=np.int64) % p, axis=0):
        r = r.copy()
        for piv, b in basis:
            if r[piv]:
                r = (r - r[piv] * b) % p
        nz = np.flatnonzero(r)
        if len(nz):
            piv = nz[0]
            r = (r * pow(int(r[piv]), -1, p)) % p
            basis = [(pv, (b - b[piv] * r) % p) for pv, b in basis]
            basis.append((piv, r))
    return len(basis)


def kernel_order_schreier(q_small, p, budget=CLOSURE_BUDGET):
    """|ker(Gamma(mod p q_small) -> Gamma(mod q_small))| via Schreier generators.

    Requires p q_small | q_small^2, so the kernel consists of I + q_small X
    with X mod p and multiplies as X + Y: it is elementary abelian of order
    p^rank, rank taken over the Schreier generators rep(g) s rep(gs)^-1.
    """
    q_big = q_small * p
    if (q_small * q_small) % q_big:
        raise DomainError(f"{q_big} does not divide {q_small}^2")
    keys, lifts = _tree_representatives(q_small, q_big, budget)
    w = _weights(q_small)
    ident = np.array(IDENTITY_DIGITS, dtype=np.int64)
    rows = []
    for g in GEN_ORDER:
        prod = mat_mul(lifts, np.array(GEN_DIGITS[g], dtype=np.int64) % q_big, q_big)
        pos = np.searchsorted(keys, (prod % q_small) @ w)
        s = mat_mul(prod, mat_inverse_sl2(lifts[pos], q_big), q_big)
        diff = (s - ident) % q_big
        if np.any(diff % q_small):
            raise TheoremCheckError("Schreier generator is not in the kernel")
        rows.append(diff // q_small)
    return p ** _rank_mod_p(np.concatenate(rows), p), len(keys)


def lifting_ratio_check(slow=False, raise_on_failure=True):
    """|Gamma(mod p^2)|/|Gamma(mod p)| against the ambient ratio p^6.

    3 -> 9 and 4 -> 8 are computed both by direct closure and by the kernel
    rank; 5 -> 25 (slow) uses the kernel rank only, the direct closure having
    about 2.3e8 elements.
    """
    cases = [(3, 3), (4, 2)] + ([(5, 5)] if slow else [])
    report = {}
    failed = []
    for q_small, p in cases:
        q_big = q_small * p
        kernel, small_order = kernel_order_schreier(q_small, p)
        entry = {
            "from": q_small,
            "to": q_big,
            "ratio_kernel": kernel,
            "ambient_ratio": ambient_order(q_big) // ambient_order(q_small),
            "expected": p**6,
        }
        if ambient_order(q_big) <= CLOSURE_BUDGET:
            entry["ratio_direct"] = group_closure_order(q_big).order // small_order
        ok = entry["ratio_kernel"] == entry["expected"] == entry["ambient_ratio"]
        ok = ok and entry.get("ratio_direct", entry["expected"]) == entry["expected"]
        entry["ok"] = ok
        report[f"{q_small}->{q_big}"] = entry
        if not ok:
            failed.append(f"{q_small}->{q_big}: {entry}")
    if failed and raise_on_failure:
        raise TheoremCheckError("; ".join(failed))
    return report


# ---- admissible residues -------------------------------------------------------

_QUAD = np.array([QUAD_ACTION[g] for g in GEN_ORDER], dtype=np.int64)


def vector_orbit_mod(M, budget=CLOSURE_BUDGET):
    """Quadruples (a, b, c, d) mod M reachable from (0, 0, 1, 0)."""
    if M < 2:
        raise DomainError("modulus must be >= 2")
    if M**4 > budget:
        raise ResourceLimitError(f"{M}^4 states exceed budget {budget}")
    w = M ** np.arange(3, -1, -1, dtype=np.int64)
    visited = np.zeros(M**4, dtype=bool)
    frontier = np.array([[0, 0, 1, 0]], dtype=np.int64) % M
    visited[frontier @ w] = True
    while len(frontier):
        children = np.concatenate([(frontier @ G.T) % M for G in _QUAD])
        keys = np.unique(children @ w)
        keys = keys[~visited[keys]]
        visited[keys] = True
        frontier = np.stack([(keys // x) % M for x in w], axis=1)
    keys = np.flatnonzero(visited)
    return np.stack([(keys // x) % M for x in w], axis=1)


def admissible_residues(q, budget=CLOSURE_BUDGET):
    """Residues mod q of asymmetric periods 2l and symmetric periods 10l."""
    M = q * 5 // gcd(q, 5)
    thin = vector_orbit_mod(M, budget)
    # fat cylinders carry phi * v = (b, a + b, d, c + d)
    fat = np.stack([thin[:, 1], thin[:, 0] + thin[:, 1], thin[:, 3], thin[:, 2] + thin[:, 3]], axis=1) % M
    vecs = np.concatenate([thin, fat])
    a, b, c, d = vecs.T
    ell = vecs.sum(axis=1)
    disc = ((d - b) + 2 * (c - a)) % 5
    asym = sorted({int(x) for x in (2 * ell[disc == 0]) % q})
    sym = sorted({int(x) for x in (10 * ell[disc != 0]) % q})
    return {"q": q, "asymmetric": asym, "symmetric": sym, "orbit_size_mod": {"modulus": M, "size": len(thin)}}


def even_residues(q):
    return sorted({(2 * k) % q for k in range(q)})
