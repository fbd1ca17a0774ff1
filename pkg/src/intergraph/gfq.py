"""Finite fields GF(p^k) in polynomial representation.

Elements are stored as integer codes ``sum(c_i * p**i)`` where ``c_i`` is the
coefficient of ``x**i``.  Multiplication goes through exp/log tables built
from the primitive element, so fields are limited to ``FIELD_CAP`` elements.

For even ``k`` the field is treated as the quadratic extension GF(q^2) of
GF(q), ``q = p**(k // 2)``, which gives :meth:`Field.frobenius`,
:meth:`Field.trace` and :meth:`Field.norm`.
"""
from __future__ import annotations

from functools import lru_cache
from math import gcd
from itertools import product

FIELD_CAP = 2**20
_ADD_TABLE_MAX = 512


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_power(q: int) -> tuple[int, int] | None:
    """Return ``(p, m)`` with ``q == p**m``, or None if q is not a prime power."""
    if q < 2:
        return None
    f = factorize(q)
    if len(f) != 1:
        return None
    (p, m), = f.items()
    return p, m


# -- polynomial helpers over GF(p); coefficient tuples, lowest degree first --

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: tuple[int, ...], p: int) -> list[int]:
    a = _poly_trim([c % p for c in a])
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = (a[-1] * inv_lead) % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _poly_trim(a)
    return a


def _monic_polys(p: int, deg: int):
    """Monic polynomials of exact degree ``deg``, smallest code first."""
    for low in product(range(p), repeat=deg):
        yield tuple(reversed(low)) + (1,)


def is_irreducible(m: tuple[int, ...], p: int) -> bool:
    deg = len(m) - 1
    if deg <= 0:
        return False
    if deg == 1:
        return True
    if m[0] == 0:
        return False
    for d in range(1, deg // 2 + 1):
        for f in _monic_polys(p, d):
            if not _poly_mod(list(m), f, p):
                return False
    return True


def smallest_irreducible(p: int, k: int) -> tuple[int, ...]:
    for m in _monic_polys(p, k):
        if is_irreducible(m, p):
            return m
    raise AssertionError(f"no irreducible polynomial of degree {k} over GF({p})")


class Field:
    """GF(p^k) with a fixed modulus and primitive element.

    Use :func:`make_field` (cached) rather than calling this directly.
    """

    def __init__(self, p: int, k: int, cap: int = FIELD_CAP):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if k < 1:
            raise FieldError("degree must be positive")
        order = p**k
        if order > cap:
            raise FieldError(f"field order {order} exceeds cap {cap}")
        self.p = p
        self.k = k
        self.order = order
        self.modulus = smallest_irreducible(p, k)
        self.q = p ** (k // 2) if k % 2 == 0 else None

        self._digits = [self._to_coeffs(c) for c in range(order)]
        self._omega, self._exp, self._log = self._find_primitive()

        self._add_table = None
        if p != 2 and order <= _ADD_TABLE_MAX:
            self._add_table = [
                [self._add_slow(a, b) for b in range(order)] for a in range(order)
            ]
        self.zero = FieldElement(self, 0)
        self.one = FieldElement(self, 1)
        self.omega = FieldElement(self, self._omega)

    def __repr__(self):
        return f"GF({self.p}^{self.k})"

    def __reduce__(self):
        return make_field, (self.p, self.k)

    # -- code-level arithmetic (ints in range(order)) --

    def _to_coeffs(self, c: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.k):
            c, r = divmod(c, self.p)
            out.append(r)
        return tuple(out)

    def _from_coeffs(self, coeffs) -> int:
        c = 0
        for v in reversed(list(coeffs)):
            c = c * self.p + (v % self.p)
        return c

    def _add_slow(self, a: int, b: int) -> int:
        p = self.p
        da, db = self._digits[a], self._digits[b]
        return self._from_coeffs([(x + y) % p for x, y in zip(da, db)])

    def _poly_mulmod(self, a: int, b: int) -> int:
        da, db = self._digits[a], self._digits[b]
        prod = [0] * (2 * self.k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return self._from_coeffs(_poly_mod(prod, self.modulus, self.p) + [0] * self.k)

    def _mul_by_x(self, a: int) -> int:
        p, k = self.p, self.k
        top = a // p ** (k - 1)
        a = (a % p ** (k - 1)) * p
        if top:
            # x^k = -(m_0 + ... + m_{k-1} x^{k-1})
            a = self._add_slow(a, self._from_coeffs([-top * m for m in self.modulus[:-1]]))
        return a

    def _find_primitive(self):
        n = self.order - 1
        if n == 1:
            return 1, [1], {1: 0}
        cofactors = [n // r for r in factorize(n)]

        def poly_pow(a: int, e: int) -> int:
            result, base = 1, a
            while e:
                if e & 1:
                    result = self._poly_mulmod(result, base)
                base = self._poly_mulmod(base, base)
                e >>= 1
            return result

        for cand in range(2, self.order):
            if all(poly_pow(cand, e) != 1 for e in cofactors):
                break
        else:
            raise AssertionError(f"no primitive element found in {self!r}; modulus is not irreducible")
        exp = [0] * n
        log = [0] * self.order
        step = self._mul_by_x if cand == self.p else (lambda a: self._poly_mulmod(a, cand))
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = step(x)
        if x != 1 or len(set(exp)) != n:
            raise AssertionError("primitive element has wrong order")
        return cand, exp, log

    def add_c(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a][b]
        return self._add_slow(a, b)

    def neg_c(self, a: int) -> int:
        if self.p == 2 or a == 0:
            return a
        return self._from_coeffs([-x for x in self._digits[a]])

    def sub_c(self, a: int, b: int) -> int:
        return self.add_c(a, self.neg_c(b))

    def mul_c(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.order - 1)]

    def inv_c(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in finite field")
        return self._exp[-self._log[a] % (self.order - 1)]

    def pow_c(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 1 if e == 0 else 0
        return self._exp[(self._log[a] * e) % (self.order - 1)]

    def frob_c(self, a: int) -> int:
        return self.pow_c(a, self._require_quadratic())

    def _require_quadratic(self) -> int:
        if self.q is None:
            raise FieldError(f"{self!r} is not a quadratic extension GF(q^2)")
        return self.q

    # -- element-level API --

    def __call__(self, value) -> FieldElement:
        """Coerce an int (taken mod p, i.e. the prime-field image) or element."""
        if isinstance(value, FieldElement):
            if value.field is not self:
                raise FieldError("element belongs to a different field")
            return value
        return FieldElement(self, self._from_coeffs([value] + [0] * (self.k - 1)))

    def from_coeffs(self, coeffs) -> FieldElement:
        coeffs = list(coeffs)
        if len(coeffs) > self.k:
            raise FieldError("too many coefficients")
        return FieldElement(self, self._from_coeffs(coeffs + [0] * (self.k - len(coeffs))))

    def element(self, code: int) -> FieldElement:
        if not 0 <= code < self.order:
            raise FieldError(f"code {code} out of range")
        return FieldElement(self, code)

    def elements(self) -> list[FieldElement]:
        return [FieldElement(self, c) for c in range(self.order)]

    def frobenius(self, a: FieldElement) -> FieldElement:
        return FieldElement(self, self.frob_c(self._own(a)))

    def trace(self, a: FieldElement) -> FieldElement:
        c = self._own(a)
        return FieldElement(self, self.add_c(c, self.frob_c(c)))

    def norm(self, a: FieldElement) -> FieldElement:
        c = self._own(a)
        return FieldElement(self, self.pow_c(c, self._require_quadratic() + 1))

    def in_subfield(self, a: FieldElement) -> bool:
        return self.frob_c(self._own(a)) == a.code

    def lambda_element(self) -> FieldElement:
        """omega^(q-1), an element of multiplicative order q+1."""
        q = self._require_quadratic()
        if q <= 2:
            raise FieldError("lambda requires q > 2")
        return self.omega ** (q - 1)

    def solve_trace(self, c: FieldElement, excluded=()) -> FieldElement:
        """Some ``b`` with ``trace(b) == c`` and ``b`` not in ``excluded``.

        Scans codes in increasing order for q <= 64, otherwise solves the
        GF(p)-linear trace system and walks the kernel coset.
        """
        q = self._require_quadratic()
        c = self._own(c)
        if self.frob_c(c) != c:
            raise FieldError("trace values lie in GF(q)")
        bad = {self._own(e) for e in excluded}
        if q <= 64:
            for b in range(self.order):
                if b not in bad and self.add_c(b, self.frob_c(b)) == c:
                    return FieldElement(self, b)
        else:
            for b in self._trace_fiber(c):
                if b not in bad:
                    return FieldElement(self, b)
        raise AssertionError("trace fiber exhausted by exclusions")

    def _trace_fiber(self, c: int):
        # trace is GF(p)-linear; columns are images of the basis x^i
        p, k = self.p, self.k
        basis = [self._from_coeffs([int(i == j) for j in range(k)]) for i in range(k)]
        cols = [self._digits[self.add_c(b, self.frob_c(b))] for b in basis]
        rows = [[cols[j][i] for j in range(k)] + [self._digits[c][i]] for i in range(k)]
        pivots = []
        r = 0
        for col in range(k):
            piv = next((i for i in range(r, k) if rows[i][col]), None)
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = pow(rows[r][col], p - 2, p)
            rows[r] = [(v * inv) % p for v in rows[r]]
            for i in range(k):
                if i != r and rows[i][col]:
                    f = rows[i][col]
                    rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
            pivots.append(col)
            r += 1
        if any(rows[i][k] for i in range(r, k)):
            raise AssertionError("trace system inconsistent")
        free = [j for j in range(k) if j not in pivots]
        for vals in product(range(p), repeat=len(free)):
            x = [0] * k
            for j, v in zip(free, vals):
                x[j] = v
            for i, col in enumerate(pivots):
                x[col] = (rows[i][k] - sum(rows[i][j] * x[j] for j in free)) % p
            yield self._from_coeffs(x)

    def _own(self, a: FieldElement) -> int:
        if not isinstance(a, FieldElement):
            return self(a).code
        if a.field is not self:
            raise FieldError("element belongs to a different field")
        return a.code


@lru_cache(maxsize=None)
def make_field(p: int, k: int = 1) -> Field:
    return Field(p, k)


def quadratic_field(q: int) -> Field:
    """GF(q^2) for a prime power q."""
    pm = prime_power(q)
    if pm is None:
        raise FieldError(f"{q} is not a prime power")
    p, m = pm
    return make_field(p, 2 * m)


class FieldElement:
    __slots__ = ("field", "code")

    def __init__(self, field: Field, code: int):
        self.field = field
        self.code = code

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field._digits[self.code]

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field is not self.field:
                raise FieldError("operands from different fields")
            return other.code
        if isinstance(other, int):
            return self.field(other).code
        return NotImplemented

    def __add__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.add_c(self.code, b))

    __radd__ = __add__

    def __sub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub_c(self.code, b))

    def __rsub__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.sub_c(b, self.code))

    def __mul__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul_c(self.code, b))

    __rmul__ = __mul__

    def __truediv__(self, other):
        b = self._other(other)
        if b is NotImplemented:
            return b
        return FieldElement(self.field, self.field.mul_c(self.code, self.field.inv_c(b)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg_c(self.code))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow_c(self.code, e))

    def inverse(self) -> FieldElement:
        return FieldElement(self.field, self.field.inv_c(self.code))

    def order(self) -> int:
        """Multiplicative order."""
        if self.code == 0:
            raise ZeroDivisionError("zero has no multiplicative order")
        n = self.field.order - 1
        lg = self.field._log[self.code]
        return n // gcd(n, lg)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field is other.field and self.code == other.code
        if isinstance(other, int):
            return self.code == self.field(other).code
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.k, self.code))

    def __bool__(self):
        return self.code != 0

    def __repr__(self):
        return f"{self.field!r}{list(self.coeffs)}"
