"""Imaginary quadratic fields Q(sqrt(-d)) and their form class groups.

A field is described by its squarefree parameter d, its discriminant,
its ramified primes, and the order of its unit group.  The ideal class
group is realized concretely as the set of reduced primitive positive
definite binary quadratic forms of the field discriminant, with Gauss
composition as the group law.  The quadratic character attached to the
field is the Kronecker symbol of the (signed) discriminant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    DiscriminantMismatch,
    InvalidInput,
    NonFundamentalDiscriminant,
    NotSquarefree,
)

__all__ = [
    "QuadField",
    "FormClass",
    "ClassGroup",
    "from_squarefree_d",
    "fields_with_disc_at_most",
    "is_squarefree",
    "is_fundamental_discriminant",
    "kronecker_symbol",
    "chi_table",
    "reduced_forms",
    "compose",
    "class_power",
    "torsion_count",
    "clear_caches",
]


def is_squarefree(n: int) -> bool:
    """True when no prime square divides n (n must be positive)."""
    if n < 1:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        while n % p == 0:
            n //= p
        p += 1 if p == 2 else 2
    return True


def _prime_factors(n: int) -> tuple[int, ...]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return tuple(out)


@dataclass(frozen=True)
class QuadField:
    """Invariants of the imaginary quadratic field Q(sqrt(-d)).

    disc_abs is the absolute value of the field discriminant, disc_signed
    the discriminant itself (negative), r the number of ramified primes,
    and mu_order the number of roots of unity in the field.
    """

    d: int
    disc_abs: int
    disc_signed: int
    ramified_primes: tuple[int, ...]
    r: int
    mu_order: int

    def __str__(self) -> str:
        if self.d == 1:
            return "Q(i)"
        return f"Q(sqrt(-{self.d}))"


def from_squarefree_d(d: int) -> QuadField:
    """Build the field Q(sqrt(-d)) from a squarefree integer d >= 1."""
    if not isinstance(d, int) or isinstance(d, bool):
        raise InvalidInput(f"d must be an integer, got {d!r}")
    if d < 1:
        raise InvalidInput(f"d must be >= 1, got {d}")
    if not is_squarefree(d):
        raise NotSquarefree(f"d = {d} has a square factor")
    disc = d if d % 4 == 3 else 4 * d
    primes = _prime_factors(disc)
    mu = 6 if d == 3 else 4 if d == 1 else 2
    return QuadField(
        d=d,
        disc_abs=disc,
        disc_signed=-disc,
        ramified_primes=primes,
        r=len(primes),
        mu_order=mu,
    )


def fields_with_disc_at_most(limit: int) -> tuple[QuadField, ...]:
    """All imaginary quadratic fields with |discriminant| <= limit, by disc."""
    fields = []
    for d in range(1, max(limit, 0) + 1):
        if not is_squarefree(d):
            continue
        disc = d if d % 4 == 3 else 4 * d
        if disc <= limit:
            fields.append(from_squarefree_d(d))
    fields.sort(key=lambda f: (f.disc_abs, f.d))
    return tuple(fields)


def is_fundamental_discriminant(D: int) -> bool:
    """True when D is a fundamental discriminant (of either signature).

    D = 1 counts as fundamental (trivial character); otherwise either
    D = 1 mod 4 and squarefree, or D = 4m with m = 2, 3 mod 4 squarefree.
    """
    if D == 1:
        return True
    if D % 4 == 1:
        return is_squarefree(abs(D))
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(abs(m))
    return False


@lru_cache(maxsize=None)
def _require_fundamental(D: int) -> None:
    if not is_fundamental_discriminant(D):
        raise NonFundamentalDiscriminant(f"{D} is not a fundamental discriminant")


def kronecker_symbol(D: int, m: int) -> int:
    """Kronecker symbol (D/m) for a fundamental discriminant D and m >= 0.

    This is the quadratic character of conductor |D|: completely
    multiplicative, periodic with period |D|, and zero exactly on the
    integers sharing a factor with D.
    """
    _require_fundamental(D)
    if not isinstance(m, int) or isinstance(m, bool):
        raise InvalidInput(f"m must be an integer, got {m!r}")
    if m < 0:
        raise InvalidInput(f"m must be >= 0, got {m}")
    if m == 0:
        return 1 if abs(D) == 1 else 0
    a = D
    n = m
    sign = 1
    while n % 2 == 0:
        if a % 2 == 0:
            return 0
        n //= 2
        if a % 8 in (3, 5):
            sign = -sign
    # n is now odd, so (a/n) only depends on a mod n
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a %= n
    return sign if n == 1 else 0


@lru_cache(maxsize=None)
def chi_table(D: int) -> tuple[int, ...]:
    """One full period of the character: chi_D(0), ..., chi_D(|D| - 1)."""
    _require_fundamental(D)
    q = abs(D)
    return tuple(kronecker_symbol(D, m) for m in range(q))


@dataclass(frozen=True, order=True)
class FormClass:
    """A reduced primitive positive definite form a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


@dataclass(frozen=True)
class ClassGroup:
    """The form class group of a field: all reduced forms plus the law."""

    field: QuadField
    classes: tuple[FormClass, ...]
    principal: FormClass

    @property
    def h(self) -> int:
        return len(self.classes)


def _reduce_triple(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Reduce a positive definite form: |b| <= a <= c, b >= 0 on boundary."""
    D = b * b - 4 * a * c
    while True:
        if b > a or b <= -a:
            # shift b into (-a, a]
            q = (b + a - 1) // (2 * a)
            b -= 2 * a * q
            c = (b * b - D) // (4 * a)
        if a > c:
            a, b, c = c, -b, a
            continue
        break
    if a == c and b < 0:
        b = -b
    return a, b, c


def _principal_triple(D: int) -> tuple[int, int, int]:
    b0 = D % 2
    return 1, b0, (b0 * b0 - D) // 4


@lru_cache(maxsize=None)
def reduced_forms(field: QuadField) -> ClassGroup:
    """Enumerate every reduced form of the field discriminant.

    A triple (a, b, c) with b^2 - 4ac = D < 0 is reduced when
    |b| <= a <= c with b >= 0 if |b| = a or a = c; each ideal class
    contains exactly one such form, so the count is the class number.
    """
    D = field.disc_signed
    classes = []
    amax = math.isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            t = b * b - D
            if t % (4 * a):
                continue
            c = t // (4 * a)
            if c < a:
                continue
            if math.gcd(a, b, c) != 1:
                continue
            if b < 0 and (a == c or -b == a):
                continue
            classes.append(FormClass(a, b, c))
    classes.sort()
    principal = FormClass(*_principal_triple(D))
    assert principal in classes
    return ClassGroup(field=field, classes=tuple(classes), principal=principal)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _compose_triples(
    f1: tuple[int, int, int], f2: tuple[int, int, int], D: int
) -> tuple[int, int, int]:
    """Gauss composition of two primitive forms of discriminant D.

    Textbook composition: pick A with the composed form
    (a1*a2, b2 + 2*a2*A, *) of discriminant D, then reduce.  The branch
    structure handles non-coprime leading coefficients, which occur for
    composite discriminants (squaring (2,2,3) at D = -20, for instance).
    """
    if f1[0] < f2[0]:
        f1, f2 = f2, f1
    a1, b1, c1 = f1
    a2, b2, c2 = f2
    s = (b1 + b2) // 2
    n = b2 - s
    d, u, v = _ext_gcd(a2, a1)
    if d == 1:
        A = -u * n
        d1 = 1
    elif s % d == 0:
        A = -u * n
        d1 = d
        a1 //= d1
        a2 //= d1
        s //= d1
    else:
        d1, u1, _ = _ext_gcd(s, d)
        if d1 > 1:
            a1 //= d1
            a2 //= d1
            s //= d1
            d //= d1
        # d divides n once gcd(s, d) = 1: n*s = a2*c2 - a1*c1
        ell = (-u1 * (u * (c1 % d) + v * (c2 % d))) % d
        A = -u * (n // d) + ell * (a1 // d)
    A %= a1
    a3 = a1 * a2
    b3 = b2 + 2 * a2 * A
    t = b3 * b3 - D
    assert t % (4 * a3) == 0, "composition produced an invalid form"
    c3 = t // (4 * a3)
    return _reduce_triple(a3, b3, c3)


def compose(g1: FormClass, g2: FormClass, group: ClassGroup) -> FormClass:
    """Product of two classes of the group, as a reduced form."""
    D = group.field.disc_signed
    if g1.discriminant != D or g2.discriminant != D:
        raise DiscriminantMismatch(
            f"forms {g1} and {g2} do not both have discriminant {D}"
        )
    return FormClass(*_compose_triples((g1.a, g1.b, g1.c), (g2.a, g2.b, g2.c), D))


def inverse_class(g: FormClass) -> FormClass:
    """The inverse class, represented by the reduction of (a, -b, c)."""
    return FormClass(*_reduce_triple(g.a, -g.b, g.c))


def class_power(g: FormClass, m: int, group: ClassGroup) -> FormClass:
    """g composed with itself m times (m >= 0; m = 0 gives the identity)."""
    if m < 0:
        raise InvalidInput(f"exponent must be >= 0, got {m}")
    result = group.principal
    base = g
    while m:
        if m & 1:
            result = compose(result, base, group)
        m >>= 1
        if m:
            base = compose(base, base, group)
    return result


def torsion_count(group: ClassGroup, m: int) -> int:
    """Number of classes g with g^m equal to the principal class."""
    if m < 1:
        raise InvalidInput(f"m must be >= 1, got {m}")
    e = group.principal
    return sum(1 for g in group.classes if class_power(g, m, group) == e)


def clear_caches() -> None:
    """Reset this module's memo tables (used by tests)."""
    _require_fundamental.cache_clear()
    chi_table.cache_clear()
    reduced_forms.cache_clear()
