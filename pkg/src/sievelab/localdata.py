"""Finite local data of a quadric: point counts and densities mod p.

For the surface f(x) = t let

    N(p)  = #{x in (Z/pZ)^3 : f(x) = t mod p}
    N0(p) = #{x as above with the sieved coordinate product = 0 mod p}

where the sieved product is x1, x1*x2 or x1*x2*x3 depending on the chosen
projection.  The local density entering the sieve is omega(p)/p = N0/N,
extended multiplicatively to square-free moduli, and forced to 0 on the
exceptional prime set B = {2, 3, 5, 7} (a prime is bad when N0 = N, which
makes sieving at p impossible; for square-free d(f)t the bad primes all lie
in B).

When p is odd, p does not divide d(f) t, d(f) is an integer and |d(f) t| is
square-free, the count has the Cassels closed form

    N(p) = p^2 + legendre(-d(f) t, p) * p,

which cross-checks the enumeration.

Counting is O(p^2): for fixed (x1, x2) the equation is a quadratic (or
linear) in x3 whose root count mod p is read off a residue table.  An
O(p^3) exhaustive oracle is retained for verification at small p.

Densities here are computed on the whole variety mod p.  The variety is a
finite disjoint union of orbits of the integral automorph group, so these
are aggregates over orbits; per-orbit ratios are not resolved by this
module (see LocalDensityTable.caveat).
"""

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction

from .arith import factorint, is_prime, legendre_raw, primes_up_to
from .errors import DegenerateLocalError, DomainError, ResourceError
from .quadforms import TernaryForm, det_form, eval_form, transform

BAD_SET = frozenset({2, 3, 5, 7})

VARIANTS = ("x1", "x1x2", "x1x2x3")

# Work guards for solvable_mod: modulus cap per prime power, then per-path
# caps (O(q^2) completed-square sweep, O(q^3) full scan) beyond which an
# exhaustive no-witness verdict is not affordable.
_MAX_PRIME_POWER = 10 ** 6
_MAX_PIVOT_SWEEP = 2000
_MAX_FULL_SCAN = 270
_PROBE_BOX = 16


def legendre(n: int, p: int) -> int:
    """Legendre symbol (n|p) for an odd prime p."""
    if p == 2 or not is_prime(p):
        raise DomainError(f"p must be an odd prime, got {p}")
    return legendre_raw(n, p)


def _check_variant(variant: str) -> None:
    if variant not in VARIANTS:
        raise DomainError(f"variant must be one of {VARIANTS}, got {variant!r}")


def _chi_table(p: int) -> list[int]:
    """chi[r] = 1 if r is a nonzero square mod p, -1 if non-square, 0 if r=0."""
    chi = [-1] * p
    chi[0] = 0
    for y in range(1, p):
        chi[y * y % p] = 1
    return chi


def _root_count(a: int, b: int, c: int, p: int, chi: list[int]) -> int:
    """Number of x in F_p with a x^2 + b x + c = 0 (p odd)."""
    if a % p == 0:
        if b % p == 0:
            return p if c % p == 0 else 0
        return 1
    disc = (b * b - 4 * a * c) % p
    return 1 + chi[disc]


def _has_root_zero(c: int, p: int) -> bool:
    """Whether x = 0 solves the cell's x3-equation (constant term vanishes)."""
    return c % p == 0


def count_Vt_mod_p(f: TernaryForm, t: int, p: int) -> int:
    """#{x in (Z/pZ)^3 : f(x) = t mod p}, exact."""
    if not is_prime(p):
        raise DomainError(f"p must be prime, got {p}")
    if p == 2:
        return sum(1 for x1 in range(2) for x2 in range(2) for x3 in range(2)
                   if eval_form(f, (x1, x2, x3)) % 2 == t % 2)
    chi = _chi_table(p)
    total = 0
    for x1 in range(p):
        for x2 in range(p):
            b = (f.a13 * x1 + f.a23 * x2) % p
            c = (f.a11 * x1 * x1 + f.a22 * x2 * x2 + f.a12 * x1 * x2 - t) % p
            total += _root_count(f.a33, b, c, p, chi)
    return total


def count_V0_mod_p(f: TernaryForm, t: int, p: int, variant: str) -> int:
    """Count of points of f = t mod p whose sieved coordinate product is 0 mod p."""
    _check_variant(variant)
    if not is_prime(p):
        raise DomainError(f"p must be prime, got {p}")
    if p == 2:
        prod_index = {"x1": 1, "x1x2": 2, "x1x2x3": 3}[variant]
        total = 0
        for x1 in range(2):
            for x2 in range(2):
                for x3 in range(2):
                    if eval_form(f, (x1, x2, x3)) % 2 != t % 2:
                        continue
                    prod = (x1, x1 * x2, x1 * x2 * x3)[prod_index - 1]
                    total += prod % 2 == 0
        return total

    chi = _chi_table(p)
    total = 0
    for x1 in range(p):
        for x2 in range(p):
            b = (f.a13 * x1 + f.a23 * x2) % p
            c = (f.a11 * x1 * x1 + f.a22 * x2 * x2 + f.a12 * x1 * x2 - t) % p
            if variant == "x1":
                if x1 == 0:
                    total += _root_count(f.a33, b, c, p, chi)
            elif variant == "x1x2":
                if x1 == 0 or x2 == 0:
                    total += _root_count(f.a33, b, c, p, chi)
            else:
                if x1 == 0 or x2 == 0:
                    total += _root_count(f.a33, b, c, p, chi)
                else:
                    total += _has_root_zero(c, p)
    return total


def _count_bruteforce(f: TernaryForm, t: int, p: int, variant: str | None = None) -> int:
    """O(p^3) exhaustive count; verification oracle for small p only."""
    prod = {None: None, "x1": 1, "x1x2": 2, "x1x2x3": 3}[variant]
    total = 0
    for x1 in range(p):
        for x2 in range(p):
            for x3 in range(p):
                if eval_form(f, (x1, x2, x3)) % p != t % p:
                    continue
                if prod is None:
                    total += 1
                else:
                    value = (x1, x1 * x2, x1 * x2 * x3)[prod - 1]
                    total += value % p == 0
    return total


def cassels_count(f: TernaryForm, t: int, p: int) -> int:
    """Closed-form count p^2 + (-d(f)t | p) p for good odd primes.

    Requires: p odd prime, d(f) integral, p coprime to d(f) t, and |d(f) t|
    square-free.
    """
    if p == 2 or not is_prime(p):
        raise DomainError(f"violated: p must be an odd prime (p={p})")
    d = det_form(f)
    if d.denominator != 1:
        raise DomainError(f"violated: d(f) must be an integer (d(f)={d})")
    d = int(d)
    if t == 0:
        raise DomainError("violated: t must be nonzero")
    if (d * t) % p == 0:
        raise DomainError(f"violated: p must not divide d(f)*t (p={p}, d*t={d * t})")
    if any(e > 1 for e in factorint(abs(d * t)).values()):
        raise DomainError(f"violated: |d(f)*t| must be square-free (got {abs(d * t)})")
    return p * p + legendre(-d * t, p) * p


def raw_omega_over_p(f: TernaryForm, t: int, p: int, variant: str) -> Fraction:
    """N0/N mod p as an exact rational, no exceptional-set convention."""
    _check_variant(variant)
    n = count_Vt_mod_p(f, t, p)
    if n == 0:
        raise DegenerateLocalError(f"no points mod {p}; density undefined")
    return Fraction(count_V0_mod_p(f, t, p, variant), n)


def omega_over_p(f: TernaryForm, t: int, p: int, variant: str,
                 bad_set: frozenset = BAD_SET) -> Fraction:
    """Sieve density omega(p)/p: N0/N, forced to 0 for p in the exceptional set."""
    if p in bad_set:
        # evaluate anyway so degenerate local data still surfaces
        raw_omega_over_p(f, t, p, variant)
        return Fraction(0)
    return raw_omega_over_p(f, t, p, variant)


def omega_d(f: TernaryForm, t: int, d: int, variant: str,
            bad_set: frozenset = BAD_SET) -> Fraction:
    """Multiplicative extension of omega(p)/p over square-free d >= 1."""
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    if d == 1:
        return Fraction(1)
    factors = factorint(d)
    if any(e > 1 for e in factors.values()):
        raise DomainError(f"d must be square-free, got {d}")
    out = Fraction(1)
    for p in factors:
        out *= omega_over_p(f, t, p, variant, bad_set)
        if out == 0:
            return out
    return out


def bad_primes(f: TernaryForm, t: int, variant: str, p_max: int) -> set[int]:
    """Primes p <= p_max at which every local point has sieved product 0."""
    _check_variant(variant)
    if p_max < 7:
        raise DomainError(f"p_max must be >= 7, got {p_max}")
    out = set()
    for p in primes_up_to(p_max):
        if count_V0_mod_p(f, t, p, variant) == count_Vt_mod_p(f, t, p):
            out.add(p)
    return out


def _solvable_prime_power(f: TernaryForm, t: int, p: int, k: int) -> bool:
    q = p ** k
    if q > _MAX_PRIME_POWER:
        raise ResourceError(
            f"prime power {p}^{k} = {q} exceeds the {_MAX_PRIME_POWER} guard")

    # Cheap deterministic witness probe; settles the common solvable case.
    box = min(q, _PROBE_BOX)
    tt = t % q
    for x1 in range(box):
        for x2 in range(box):
            for x3 in range(box):
                if eval_form(f, (x1, x2, x3)) % q == tt:
                    return True

    if k == 1 and q > 2:
        if q > 3000:
            raise ResourceError(
                f"prime modulus {q} too large for an exhaustive count")
        return count_Vt_mod_p(f, t, p) > 0

    if p != 2:
        pivoted = _pivot_form(f, p)
        if pivoted is not None:
            if q > _MAX_PIVOT_SWEEP:
                raise ResourceError(
                    f"modulus {q} too large for the completed-square sweep "
                    f"(limit {_MAX_PIVOT_SWEEP})")
            return _solvable_quadratic_pivot(pivoted, t, q)

    # Full scan with early exit; affordable only for small moduli.
    if q > _MAX_FULL_SCAN:
        raise ResourceError(
            f"modulus {q} too large for exhaustive solvability scan "
            f"(limit {_MAX_FULL_SCAN})")
    for x1 in range(q):
        for x2 in range(q):
            for x3 in range(q):
                if eval_form(f, (x1, x2, x3)) % q == tt:
                    return True
    return False


def _pivot_form(f: TernaryForm, p: int) -> TernaryForm | None:
    """A unimodular equivalent of f whose a33 is a unit mod p, if one exists."""
    if f.a33 % p != 0:
        return f
    if f.a11 % p != 0:
        u = [[0, 0, 1], [0, 1, 0], [1, 0, 0]]  # swap x1 <-> x3
        return transform(f, u)
    if f.a22 % p != 0:
        u = [[1, 0, 0], [0, 0, 1], [0, 1, 0]]  # swap x2 <-> x3
        return transform(f, u)
    # all diagonal entries divisible by p: try e3 <- e3 + e_i / e_i - e_j mixes
    candidates = ([[1, 0, 0], [0, 1, 0], [1, 0, 1]],    # x3 += x1 direction
                  [[1, 0, 0], [0, 1, 1], [0, 0, 1]],
                  [[1, 0, 1], [0, 1, 0], [0, 0, 1]],
                  [[1, 0, 0], [0, 1, -1], [0, 0, 1]],
                  [[1, 0, -1], [0, 1, 0], [0, 0, 1]],
                  [[1, 0, 0], [0, 1, 0], [-1, 0, 1]])
    for u in candidates:
        g = transform(f, u)
        if g.a33 % p != 0:
            return g
    return None


def _solvable_quadratic_pivot(f: TernaryForm, t: int, q: int) -> bool:
    """Solvability mod odd prime power q when a33 is a unit mod q.

    Completing the square maps the x3-equation to y^2 = b^2 - 4 a33 c mod q,
    so each (x1, x2) cell is a table lookup in the set of squares mod q.
    """
    squares = {y * y % q for y in range(q)}
    a = f.a33
    for x1 in range(q):
        for x2 in range(q):
            b = (f.a13 * x1 + f.a23 * x2) % q
            c = (f.a11 * x1 * x1 + f.a22 * x2 * x2 + f.a12 * x1 * x2 - t) % q
            if (b * b - 4 * a * c) % q in squares:
                return True
    return False


def solvable_mod(f: TernaryForm, t: int, d: int) -> bool:
    """Whether f(x) = t mod d has a solution, via CRT over prime powers."""
    if d < 1:
        raise DomainError(f"d must be >= 1, got {d}")
    if d == 1:
        return True
    return all(_solvable_prime_power(f, t, p, k) for p, k in factorint(d).items())


@dataclass(frozen=True)
class LocalEntry:
    p: int
    count_V: int
    count_V0: int
    raw_ratio: Fraction
    omega_over_p: Fraction   # after the exceptional-set convention
    is_bad: bool
    cassels: int | None      # closed-form count where its hypotheses hold
    cassels_agree: bool | None


@dataclass
class LocalDensityTable:
    """Per-prime local counts and densities for one (form, t, variant)."""

    form: TernaryForm
    t: int
    variant: str
    bad_set: frozenset
    entries: dict[int, LocalEntry] = field(default_factory=dict)
    findings: list[str] = field(default_factory=list)
    caveat: str = ("densities are aggregates over the whole variety mod p; "
                   "per-orbit ratios are not resolved")

    @property
    def bad_primes(self) -> set[int]:
        return {p for p, e in self.entries.items() if e.is_bad}

    def omega_d(self, d: int) -> Fraction:
        """Multiplicative omega(d)/d from the tabulated primes."""
        if d < 1:
            raise DomainError(f"d must be >= 1, got {d}")
        if d == 1:
            return Fraction(1)
        factors = factorint(d)
        if any(e > 1 for e in factors.values()):
            raise DomainError(f"d must be square-free, got {d}")
        out = Fraction(1)
        for p in factors:
            if p not in self.entries:
                raise DomainError(f"prime {p} not tabulated (p_max too small)")
            out *= self.entries[p].omega_over_p
        return out

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["p", "count_V", "count_V0", "omega_num", "omega_den",
                         "is_bad"])
        for p in sorted(self.entries):
            e = self.entries[p]
            writer.writerow([e.p, e.count_V, e.count_V0,
                             e.omega_over_p.numerator, e.omega_over_p.denominator,
                             int(e.is_bad)])
        return buf.getvalue()


def build_local_table(f: TernaryForm, t: int, variant: str, p_max: int,
                      bad_set: frozenset = BAD_SET) -> LocalDensityTable:
    """Tabulate counts, densities and bad primes for all p <= p_max."""
    _check_variant(variant)
    if p_max < 7:
        raise DomainError(f"p_max must be >= 7, got {p_max}")
    if p_max > 10 ** 4:
        raise ResourceError(f"p_max={p_max} exceeds the 10^4 table guard")

    d = det_form(f)
    dt_squarefree = (d.denominator == 1 and t != 0
                     and all(e == 1 for e in factorint(abs(int(d) * t)).values()))

    table = LocalDensityTable(form=f, t=t, variant=variant, bad_set=bad_set)
    for p in primes_up_to(p_max):
        n = count_Vt_mod_p(f, t, p)
        n0 = count_V0_mod_p(f, t, p, variant)
        raw = Fraction(n0, n) if n > 0 else Fraction(0)
        is_bad = n0 == n
        omega = Fraction(0) if (p in bad_set or is_bad) else raw
        cass = None
        agree = None
        if dt_squarefree and p != 2 and (int(d) * t) % p != 0:
            cass = cassels_count(f, t, p)
            agree = cass == n
            if not agree:
                table.findings.append(
                    f"closed-form count disagrees at p={p}: {cass} vs {n}")
        table.entries[p] = LocalEntry(p, n, n0, raw, omega, is_bad, cass, agree)
        if is_bad and dt_squarefree and p not in bad_set:
            table.findings.append(
                f"bad prime {p} outside the expected exceptional set {sorted(bad_set)}")
    return table
