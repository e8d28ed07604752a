"""Combinatorial period lengths of pentagon billiard trajectories.

A periodic direction of the golden L with long saddle connection
v = (a + b phi, c + d phi) splits the surface into two cylinders.  The thin
cylinder has core holonomy v; the fat one has core holonomy phi * v, whose
quadruple is (b, a + b, d, c + d).  Each core curve with quadruple
(a, b, c, d) gives a closed trajectory of period 2l when
(d - b) + 2(c - a) = 0 (mod 5), asymmetric, and 10l otherwise, where
l = a + b + c + d.
"""

from dataclasses import dataclass

import numpy as np

from .errors import FamilyIdentityError
from .hecke import trilinear_bottom_row
from .orbit import BASE, orbit_enumerate


@dataclass(frozen=True)
class PeriodRecord:
    v: tuple
    ell: int
    disc: int
    asymmetric: bool
    period: int


def discriminant(v):
    a, b, c, d = v
    return ((d - b) + 2 * (c - a)) % 5


def classify_period(v):
    """Period record of the closed geodesic whose holonomy quadruple is v."""
    a, b, c, d = v
    ell = a + b + c + d
    disc = discriminant(v)
    asym = disc == 0
    return PeriodRecord(tuple(v), ell, disc, asym, 2 * ell if asym else 10 * ell)


def fat_cylinder(v):
    """Quadruple of phi * v, the core holonomy of the fat cylinder in direction v."""
    a, b, c, d = v
    return (b, a + b, d, c + d)


def classify_direction(v):
    """(thin, fat) period records for the periodic direction of orbit vector v."""
    return classify_period(v), classify_period(fat_cylinder(v))


def g_discriminant(m, n, k):
    """g(m, n, k) = mnk + 3mn - m - k + 2 reduced mod 5."""
    return (m * n * k + 3 * m * n - m - k + 2) % 5


def trilinear_ell(m, n, k):
    return 3 * m * n * k + 2 * m * n + m + k + 1


# ---- spectrum census ------------------------------------------------------------

def _period_arrays(vecs):
    a, b, c, d = vecs.T
    ell = a + b + c + d
    disc = ((d - b) + 2 * (c - a)) % 5
    return ell, disc


@dataclass(frozen=True, eq=False)
class SpectrumCensus:
    """Achieved periods up to X.

    asym[n] is set when some cylinder (thin or fat) has asymmetric period n;
    asym_thin / asym_fat split that by cylinder, and sym likewise records the
    symmetric periods 10l.
    """

    bound: int
    asym: np.ndarray
    sym: np.ndarray
    asym_thin: np.ndarray
    asym_fat: np.ndarray
    sym_thin: np.ndarray
    sym_fat: np.ndarray
    sym_without_base: np.ndarray
    counts_per_ell: dict
    asym_counts_per_ell: dict

    def contains_asym(self, n):
        return 0 <= n <= self.bound and bool(self.asym[n])

    def to_report(self):
        return {
            "bound": self.bound,
            "missing_asym": missing_evens(self),
            "counts_per_ell": {str(k): v for k, v in sorted(self.counts_per_ell.items())},
            "missing_asym_thin_only": missing_evens(self, which="thin"),
            "asym_counts_per_ell": {str(k): v for k, v in sorted(self.asym_counts_per_ell.items())},
            "symmetric_periods_from_base_only": sorted(
                int(n) for n in np.flatnonzero(self.sym & ~self.sym_without_base)
            ),
        }


def _mark(bits, periods):
    periods = periods[periods < len(bits)]
    bits[periods] = True


def spectrum_scan(X, census=None, threads=1):
    """Build the period census for all periods <= X from the orbit to l <= X/2."""
    if X < 2:
        raise ValueError("X must be >= 2")
    half = X // 2
    if census is None:
        census = orbit_enumerate(half, threads=threads)
    elif census.bound < half:
        raise ValueError(f"census bound {census.bound} < X/2 = {half}")
    else:
        census = census.restrict(half)
    vecs = census.vectors
    fat = np.stack([vecs[:, 1], vecs[:, 0] + vecs[:, 1], vecs[:, 3], vecs[:, 2] + vecs[:, 3]], axis=1)
    is_base = np.all(vecs == np.array(BASE), axis=1)

    bits = {name: np.zeros(X + 1, dtype=bool) for name in ("at", "af", "st", "sf", "snb")}
    asym_counts = {}
    for name, arr in (("t", vecs), ("f", fat)):
        ell, disc = _period_arrays(arr)
        asym = disc == 0
        _mark(bits["a" + name], 2 * ell[asym])
        _mark(bits["s" + name], 10 * ell[~asym])
        _mark(bits["snb"], 10 * ell[~asym & ~is_base])
        if name == "t":
            values, counts = np.unique(ell[asym], return_counts=True)
            asym_counts = {int(v): int(c) for v, c in zip(values, counts)}
    return SpectrumCensus(
        bound=X,
        asym=bits["at"] | bits["af"],
        sym=bits["st"] | bits["sf"],
        asym_thin=bits["at"],
        asym_fat=bits["af"],
        sym_thin=bits["st"],
        sym_fat=bits["sf"],
        sym_without_base=bits["snb"],
        counts_per_ell=dict(census.counts_per_ell),
        asym_counts_per_ell=asym_counts,
    )


def missing_evens(census, which="all"):
    """Even n in [2, X] that are not asymmetric periods."""
    bits = {"all": census.asym, "thin": census.asym_thin, "fat": census.asym_fat}[which]
    evens = np.arange(2, census.bound + 1, 2)
    return [int(n) for n in evens[~bits[evens]]]


# ---- the five residue families ------------------------------------------------


@dataclass(frozen=True)
class FamilySpec:
    """m = 5m' + r_m, n = 5n' + r_n, fixed k; l = 5(c_mn m'n' + c_m m' + c_n n') + const."""

    index: int
    r_m: int
    r_n: int
    k: int
    c_mn: int
    c_m: int
    c_n: int
    const: int
    residue: int

    def mnk(self, mp, np_):
        return 5 * mp + self.r_m, 5 * np_ + self.r_n, self.k

    def ell_poly(self, mp, np_):
        return 5 * (self.c_mn * mp * np_ + self.c_m * mp + self.c_n * np_) + self.const


# coefficients as printed
FAMILIES = (
    FamilySpec(1, 3, 1, 1, 25, 6, 13, 20, 0),
    FamilySpec(2, 4, 3, 1, 25, 16, 20, 66, 1),
    FamilySpec(3, 1, 2, 3, 55, 23, 11, 27, 2),
    FamilySpec(4, 1, 3, 0, 10, 7, 2, 8, 3),
    FamilySpec(5, 2, 2, 1, 25, 11, 10, 24, 4),
)


def derive_family(fam):
    """Expand l(5m'+r_m, 5n'+r_n, k) symbolically; returns the corrected FamilySpec.

    l = (3k+2) mn + m + k + 1 is bilinear in (m', n'), so its coefficients are
    read off from four evaluations.
    """
    def ell(mp, np_):
        return trilinear_ell(*fam.mnk(mp, np_))

    e00, e10, e01, e11 = ell(0, 0), ell(1, 0), ell(0, 1), ell(1, 1)
    c_mn, c_m, c_n = e11 - e10 - e01 + e00, e10 - e00, e01 - e00
    if c_mn % 5 or c_m % 5 or c_n % 5:
        raise FamilyIdentityError(f"family {fam.index}: l is not 5*(...) + const")
    return FamilySpec(fam.index, fam.r_m, fam.r_n, fam.k, c_mn // 5, c_m // 5, c_n // 5, e00, fam.residue)


DERIVED_FAMILIES = tuple(derive_family(f) for f in FAMILIES)


def family_generate_verify(R, families=FAMILIES, raise_on_failure=True):
    """Check every family for 0 <= m', n' <= R.

    For each point: g = 0 (mod 5), l from the trilinear formula matches both
    the bottom-row quadruple sum and the family polynomial, and l = residue
    (mod 5).  Returns a report; raises FamilyIdentityError on the first
    failure when raise_on_failure is set.
    """
    if R < 0:
        raise ValueError("R must be >= 0")
    report = {}
    for fam in families:
        failures = []
        for mp in range(R + 1):
            for np_ in range(R + 1):
                m, n, k = fam.mnk(mp, np_)
                ell = trilinear_ell(m, n, k)
                problems = []
                if g_discriminant(m, n, k) != 0:
                    problems.append("g != 0 mod 5")
                if sum(trilinear_bottom_row(m, n, k)) != ell:
                    problems.append("bottom-row sum != l")
                if fam.ell_poly(mp, np_) != ell:
                    problems.append(f"polynomial gives {fam.ell_poly(mp, np_)}, l = {ell}")
                if ell % 5 != fam.residue:
                    problems.append(f"l = {ell % 5} mod 5")
                if problems:
                    if raise_on_failure:
                        raise FamilyIdentityError(
                            f"family {fam.index} at (m', n') = ({mp}, {np_}): " + "; ".join(problems)
                        )
                    failures.append({"m'": mp, "n'": np_, "problems": problems})
        report[fam.index] = {"checked": (R + 1) ** 2, "failures": failures}
    return report
