"""Jacobi-symbol obstruction for the orbit of (3, 5) under the parabolic semigroup

    Lambda = < [[1, 4], [0, 1]], [[1, 0], [4, 1]] >,

acting by (q1, q2) -> (q1 + 4 q2, q2) and (q1, q2) -> (q1, 4 q1 + q2).
Both maps keep the pair odd and coprime and leave (q1 / q2) unchanged, so
every orbit vector has symbol (3 / 5) = -1 and neither coordinate can be a
square, although all odd squares are = 1 (mod 4).
"""

from dataclasses import dataclass
from math import gcd, isqrt

import numpy as np

from .errors import DomainError, LemmaViolation, ReciprocityViolation, ResourceLimitError

SCAN_BUDGET = 10**8
BASE = (3, 5)


def jacobi_symbol(a, b):
    if b <= 0 or b % 2 == 0:
        raise DomainError(f"Jacobi symbol needs an odd positive modulus, got {b}")
    a %= b
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                result = -result
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            result = -result
        a %= b
    return result if b == 1 else 0


def jacobi_array(a, b):
    """Elementwise Jacobi symbol (a / b) for int64 arrays, b odd positive."""
    a = np.asarray(a, dtype=np.int64).copy()
    b = np.asarray(b, dtype=np.int64).copy()
    if np.any(b <= 0) or np.any(b % 2 == 0):
        raise DomainError("Jacobi symbol needs odd positive moduli")
    a %= b
    result = np.ones(a.shape, dtype=np.int64)
    active = a != 0
    while active.any():
        even = active & (a % 2 == 0)
        while even.any():
            a[even] //= 2
            flip = even & np.isin(b % 8, (3, 5))
            result[flip] *= -1
            even = active & (a % 2 == 0)
        a_act, b_act = a[active], b[active]
        flip = (a_act % 4 == 3) & (b_act % 4 == 3)
        r = result[active]
        r[flip] *= -1
        result[active] = r
        a[active], b[active] = b_act % a_act, a_act
        active = a != 0
    return np.where(b == 1, result, 0)


def _is_square(x):
    x = np.asarray(x, dtype=np.int64)
    r = np.round(np.sqrt(x.astype(np.float64))).astype(np.int64)
    return r * r == x


@dataclass(frozen=True, eq=False)
class ParabolicOrbit:
    bound: int
    base: tuple
    q1: np.ndarray
    q2: np.ndarray

    def __len__(self):
        return len(self.q1)

    def as_set(self):
        return set(zip(self.q1.tolist(), self.q2.tolist()))

    def symbols(self):
        return jacobi_array(self.q1, self.q2)


def _runs(fixed, moving, N):
    """All moving + 4k fixed <= N for k >= 1, one run per input pair."""
    counts = np.maximum((N - moving) // (4 * fixed), 0)
    total = int(counts.sum())
    if not total:
        return None
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    k = np.arange(total) - starts + 1
    f = np.repeat(fixed, counts)
    return f, np.repeat(moving, counts) + 4 * k * f


def lambda_orbit_enumerate(N, base=BASE, expect_symbol=-1, budget=SCAN_BUDGET):
    """Every orbit vector with max(q1, q2) <= N.

    The semigroup acts freely (a tree), so no deduplication is needed.  A
    vector reached by one map still needs the full run of the other map
    below it, so nodes are expanded a whole run at a time.  When
    expect_symbol is set, any member with a different Jacobi symbol raises
    LemmaViolation.
    """
    if N < max(base):
        raise DomainError(f"N must be at least {max(base)}")
    if N > budget:
        raise ResourceLimitError(f"N = {N} exceeds budget {budget}")
    b1, b2 = (np.array([x], dtype=np.int64) for x in base)
    q1s, q2s = [b1], [b2]
    need_t1 = (b1, b2)  # pairs whose (q1 + 4k q2, q2) run is still missing
    need_t2 = (b1, b2)
    total = 1
    while need_t1 is not None or need_t2 is not None:
        new_t1 = new_t2 = None
        if need_t1 is not None:
            run = _runs(need_t1[1], need_t1[0], N)  # q2 fixed, q1 moves
            if run is not None:
                f, m = run
                q1s.append(m)
                q2s.append(f)
                new_t2 = (m, f)
                total += len(m)
        if need_t2 is not None:
            run = _runs(need_t2[0], need_t2[1], N)  # q1 fixed, q2 moves
            if run is not None:
                f, m = run
                q1s.append(f)
                q2s.append(m)
                new_t1 = (f, m)
                total += len(m)
        if total > budget:
            raise ResourceLimitError(f"orbit exceeded {budget} vectors")
        need_t1, need_t2 = new_t1, new_t2
    q1, q2 = np.concatenate(q1s), np.concatenate(q2s)
    order = np.lexsort((q2, q1))
    orbit = ParabolicOrbit(N, tuple(base), q1[order], q2[order])
    if expect_symbol is not None:
        sym = orbit.symbols()
        bad = np.flatnonzero(sym != expect_symbol)
        if len(bad):
            i = bad[0]
            raise LemmaViolation(f"({orbit.q1[i]}, {orbit.q2[i]}) has symbol {sym[i]}, expected {expect_symbol}")
    return orbit


def step_invariance_sample(count, rng, max_coord=10**6):
    """Random odd coprime pairs: symbol is unchanged by both generating maps.

    Returns the number of violations (0 expected).
    """
    bad = 0
    done = 0
    while done < count:
        q1, q2 = (2 * int(rng.integers(0, max_coord)) + 1 for _ in range(2))
        if gcd(q1, q2) != 1:
            continue
        s = jacobi_symbol(q1, q2)
        if jacobi_symbol(q1 + 4 * q2, q2) != s or jacobi_symbol(q1, 4 * q1 + q2) != s:
            bad += 1
        done += 1
    return bad


def odd_squares(N):
    return [k * k for k in range(1, isqrt(N) + 1, 2)]


def square_miss_scan(N, base=BASE, raise_on_failure=True):
    """No orbit coordinate is a square; every odd square is admissible (= 1 mod 4)."""
    orbit = lambda_orbit_enumerate(N, base=base, expect_symbol=None)
    sym = orbit.symbols()
    if tuple(base) == BASE and np.any(sym != -1):
        i = np.flatnonzero(sym != -1)[0]
        raise LemmaViolation(f"({orbit.q1[i]}, {orbit.q2[i]}) has symbol {sym[i]}, expected -1")
    sq1 = orbit.q1[_is_square(orbit.q1)]
    sq2 = orbit.q2[_is_square(orbit.q2)]
    squares = sorted(set(sq1.tolist()) | set(sq2.tolist()))
    values = np.unique(orbit.q2)
    odd_sq = odd_squares(N)
    missed = [s for s in odd_sq if s % 4 == 1]
    report = {
        "N": N,
        "base": list(base),
        "orbit_size": len(orbit),
        "symbols": sorted(set(sym.tolist())),
        "coordinate_squares": squares,
        "value_set_size": int(len(values)),
        "value_set_squares": sorted(set(sq2.tolist())),
        "odd_squares": len(odd_sq),
        "odd_squares_above_1": len(odd_sq) - 1 if odd_sq else 0,
        "odd_squares_admissible": len(missed),
        "odd_squares_all_1_mod_4": len(missed) == len(odd_sq),
    }
    if squares and raise_on_failure and tuple(base) == BASE:
        raise ReciprocityViolation(f"orbit coordinates include squares {squares[:10]}")
    return report


# ---- polynomial value scans ----------------------------------------------------

POLYS = ("q-paper", "coords-literal", "f-paper", "f-literal")


def _poly_name(which):
    """Accept both q-paper and Q_paper spellings."""
    return str(which).lower().replace("_", "-")


def poly_value(which, *args):
    which = _poly_name(which)
    if which == "q-paper":
        x, y = args
        return 80 * x * y + 12 * x + 5
    if which == "coords-literal":
        x, y = args
        return (3 + 20 * y, 80 * x * y + 12 * x + 5)
    if which == "f-paper":
        x, y, z = args
        return 64 * x * y * z + 16 * x * y + 4 * x + 4 * z + 1
    if which == "f-literal":
        x, y, z = args
        return 192 * x * y * z + 80 * x * y + 12 * x + 12 * z + 5
    raise DomainError(f"unknown polynomial {which!r}")


def _mark(rep, base, step, X, chunk=1 << 22):
    """rep[base + k step] = True for k >= 0, vectorised over many (base, step)."""
    keep = base <= X
    base, step = base[keep], step[keep]
    counts = (X - base) // step + 1
    i = 0
    while i < len(base):
        j = i
        acc = 0
        while j < len(base) and (acc == 0 or acc + counts[j] <= chunk):
            acc += int(counts[j])
            j += 1
        c = counts[i:j]
        starts = np.repeat(np.cumsum(c) - c, c)
        k = np.arange(int(c.sum())) - starts
        rep[np.repeat(base[i:j], c) + k * np.repeat(step[i:j], c)] = True
        i = j


def poly_values_mask(which, X, include_zero=False):
    """Boolean mask over [0, X] of the values of the chosen polynomial."""
    which = _poly_name(which)
    if X > SCAN_BUDGET:
        raise ResourceLimitError(f"X = {X} exceeds budget {SCAN_BUDGET}")
    lo = 0 if include_zero else 1
    rep = np.zeros(X + 1, dtype=bool)
    if which in ("q-paper", "coords-literal"):
        # 80xy + 12x + 5 = (80x) y + 12x + 5
        xs = np.arange(lo, X // 12 + 2, dtype=np.int64)
        base = 80 * xs * lo + 12 * xs + 5
        step = 80 * xs
        zero = step == 0
        if zero.any():
            _mark(rep, base[zero], np.full(int(zero.sum()), X + 1, dtype=np.int64), X)
        _mark(rep, base[~zero], step[~zero], X)
        if which == "coords-literal":
            _mark(rep, np.array([3 + 20 * lo], dtype=np.int64), np.array([20], dtype=np.int64), X)
        return rep
    if which == "f-paper":
        coef = (64, 16, 4, 4, 1)
    elif which == "f-literal":
        coef = (192, 80, 12, 12, 5)
    else:
        raise DomainError(f"unknown polynomial {which!r}")
    cxyz, cxy, cx, cz, c0 = coef
    # value = (cxyz x y + cz) z + cxy x y + cx x + c0, linear in z
    slope = cxyz * lo + cxy  # growth in x*y of the value at z = lo
    head = cz * lo + c0
    xmax = (X - head) // (slope * lo + cx) if (slope * lo + cx) else 0
    xs = np.arange(lo, max(xmax, lo - 1) + 1, dtype=np.int64)
    if lo == 0:
        # x = 0: the value no longer depends on y
        _mark(rep, np.array([head], dtype=np.int64), np.array([cz or X + 1], dtype=np.int64), X)
        xs = xs[xs > 0]
    room = X - head - cx * xs
    counts = np.maximum(room // (slope * xs) - lo + 1, 0) if slope else np.zeros_like(xs)
    x = np.repeat(xs, counts)
    starts = np.repeat(np.cumsum(counts) - counts, counts)
    y = np.arange(int(counts.sum()), dtype=np.int64) - starts + lo
    base = cxyz * x * y * lo + cz * lo + cxy * x * y + cx * x + c0
    step = cxyz * x * y + cz
    _mark(rep, base, np.where(step > 0, step, X + 1), X)
    return rep


def poly_value_scan(which, X, include_zero=False):
    """Representation census of n = 1 (mod 4) up to X and the squares hit."""
    which = _poly_name(which)
    rep = poly_values_mask(which, X, include_zero)
    n = np.arange(X + 1)
    admissible = (n % 4 == 1) & (n >= 1)
    roots = np.arange(1, isqrt(X) + 1, dtype=np.int64)
    squares = roots * roots
    found = squares[rep[squares]]
    return {
        "poly": which,
        "X": X,
        "represented_fraction_admissible": float(rep[admissible].sum() / max(admissible.sum(), 1)),
        "squares_found": [int(s) for s in found],
        "represented_count": int(rep[1:].sum()),
        "include_zero": include_zero,
    }


def poly_value_trend(which, Xs=(10**5, 10**6, 10**7), include_zero=False):
    fractions = [poly_value_scan(which, X, include_zero)["represented_fraction_admissible"] for X in Xs]
    return {"poly": which, "X": list(Xs), "fractions": fractions}
