"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Values are stored in the power basis 1, z, ..., z^(phi(N)-1) after reduction
modulo the N-th cyclotomic polynomial, at the *smallest* order N that can
express them.  Equality and hashing are therefore structural.  Orders are
lifted to the lcm on demand, so mixed-order arithmetic just works.

The orders appearing in the bundled character tables divide 24; nothing here
assumes that bound.
"""
from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache


def euler_phi(n: int) -> int:
    out, d, m = 1, 2, n
    while d * d <= m:
        if m % d == 0:
            pk = 1
            while m % d == 0:
                m //= d
                pk *= d
            out *= pk - pk // d
        d += 1
    if m > 1:
        out *= m - 1
    return out


def _poly_divmod(num, den):
    """Exact division of integer polynomials (lists, low degree first)."""
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(num) - len(den), -1, -1):
        c, r = divmod(num[i + len(den) - 1], den[-1])
        assert r == 0
        q[i] = c
        for j, dj in enumerate(den):
            num[i + j] -= c * dj
    assert all(x == 0 for x in num)
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Coefficients of Phi_n, low degree first."""
    if n == 1:
        return (-1, 1)
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _poly_divmod(num, cyclotomic_polynomial(d))
    return tuple(num)


def _reduce_mod_phi(coeffs, n):
    """Reduce a coefficient list for powers of zeta_n modulo Phi_n."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1  # == euler_phi(n), monic
    c = [Fraction(x) for x in coeffs]
    for i in range(len(c) - 1, deg - 1, -1):
        lead = c[i]
        if lead:
            for j in range(len(phi)):
                c[i - deg + j] -= lead * phi[j]
        c.pop()
    while len(c) < deg:
        c.append(Fraction(0))
    return c


def _divisors(n):
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def _solve_exact(rows, rhs):
    """Solve M x = rhs over Q; return solution list or None if inconsistent."""
    m = len(rows)
    n = len(rows[0]) if rows and rows[0] else 0
    aug = [list(rows[i]) + [rhs[i]] for i in range(m)]
    piv_cols = []
    r = 0
    for j in range(n):
        piv = next((i for i in range(r, m) if aug[i][j]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][j]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(m):
            if i != r and aug[i][j]:
                c = aug[i][j]
                aug[i] = [a - c * b for a, b in zip(aug[i], aug[r])]
        piv_cols.append(j)
        r += 1
    for i in range(r, m):
        if aug[i][n]:
            return None
    x = [Fraction(0)] * n
    for i, j in enumerate(piv_cols):
        x[j] = aug[i][n]
    return x


class CycNumber:
    """An element of some Q(zeta_N), in canonical minimal-order form."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order, coeffs, _canonical=False):
        if _canonical:
            object.__setattr__(self, "order", order)
            object.__setattr__(self, "coeffs", coeffs)
            return
        red = _reduce_mod_phi(coeffs, order)
        o, c = _minimize(order, red)
        object.__setattr__(self, "order", o)
        object.__setattr__(self, "coeffs", c)

    def __setattr__(self, *a):
        raise AttributeError("CycNumber is immutable")

    # --- constructors -------------------------------------------------
    @staticmethod
    def from_rational(q) -> "CycNumber":
        return CycNumber(1, (Fraction(q),), _canonical=True)

    @staticmethod
    def zeta(n: int, k: int = 1) -> "CycNumber":
        k %= n
        return CycNumber(n, tuple(Fraction(1) if i == k else Fraction(0) for i in range(n)))

    # --- ring structure -----------------------------------------------
    def _lift(self, n):
        """Coefficient list for powers of zeta_n (length phi(n) after reduce)."""
        step = n // self.order
        out = [Fraction(0)] * n
        for k, c in enumerate(self.coeffs):
            out[k * step] += c
        return _reduce_mod_phi(out, n)

    @staticmethod
    def _coerce(x):
        if isinstance(x, CycNumber):
            return x
        if isinstance(x, (int, Fraction)):
            return CycNumber(1, (Fraction(x),), _canonical=True)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = _lcm(self.order, other.order)
        a, b = self._lift(n), other._lift(n)
        return CycNumber(n, [x + y for x, y in zip(a, b)])

    __radd__ = __add__

    def __neg__(self):
        return CycNumber(self.order, tuple(-c for c in self.coeffs), _canonical=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        n = _lcm(self.order, other.order)
        a, b = self._lift(n), other._lift(n)
        prod = [Fraction(0)] * (len(a) + len(b))
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycNumber(n, prod)

    __rmul__ = __mul__

    # --- field symmetries ----------------------------------------------
    def galois(self, j: int) -> "CycNumber":
        """Apply zeta -> zeta^j (requires gcd(j, order) == 1)."""
        n = self.order
        out = [Fraction(0)] * n
        for k, c in enumerate(self.coeffs):
            if c:
                out[(k * j) % n] += c
        return CycNumber(n, out)

    def conj(self) -> "CycNumber":
        return self.galois(self.order - 1) if self.order > 1 else self

    # --- queries ---------------------------------------------------------
    def is_zero(self):
        return all(c == 0 for c in self.coeffs)

    def is_rational(self):
        return self.order == 1

    def as_rational(self):
        """The rational value, or None if the number is irrational."""
        return self.coeffs[0] if self.order == 1 else None

    def to_complex(self) -> complex:
        z = cmath.exp(2j * cmath.pi / self.order)
        return sum(float(c) * z ** k for k, c in enumerate(self.coeffs) if c)

    # --- protocol ---------------------------------------------------------
    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        return f"CycNumber({format_cyc(self)!r})"

    def __str__(self):
        return format_cyc(self)


def _lcm(a, b):
    from math import gcd
    return a * b // gcd(a, b)


def _minimize(order, red):
    """Smallest divisor d of order with the value in Q(zeta_d).

    Returns (d, coeffs) with coeffs in the power basis of Q(zeta_d),
    i.e. length euler_phi(d).
    """
    if all(c == 0 for c in red[1:]):
        return 1, (red[0] if red else Fraction(0),)
    for d in _divisors(order)[1:-1]:
        phi_d = euler_phi(d)
        basis = []
        for j in range(phi_d):
            vec = [Fraction(0)] * order
            vec[(j * (order // d)) % order] = Fraction(1)
            basis.append(_reduce_mod_phi(vec, order))
        rows = [[basis[j][i] for j in range(phi_d)] for i in range(len(red))]
        sol = _solve_exact(rows, red)
        if sol is not None:
            return d, tuple(sol)
    return order, tuple(red)


ZERO = CycNumber(1, (Fraction(0),), _canonical=True)
ONE = CycNumber(1, (Fraction(1),), _canonical=True)


# --------------------------- text form ---------------------------------
def format_cyc(x: CycNumber) -> str:
    """Serialize: rationals as p/q, roots as zN^k, e.g. 'z8 + z8^7'."""
    if x.order == 1:
        return str(x.coeffs[0])
    terms = []
    for k, c in enumerate(x.coeffs):
        if not c:
            continue
        if k == 0:
            body = str(abs(c))
        else:
            z = f"z{x.order}" + (f"^{k}" if k != 1 else "")
            body = z if abs(c) == 1 else f"{abs(c)}*{z}"
        terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    sign, body = terms[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


def parse_cyc(text: str) -> CycNumber:
    """Parse the format_cyc serialization (whitespace optional)."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty cyclotomic literal")
    # split into signed terms
    terms = []
    i = 0
    cur = ""
    for ch in s:
        if ch in "+-" and cur and cur[-1] not in "+-^*/":
            terms.append(cur)
            cur = ch
        else:
            cur += ch
    terms.append(cur)
    total = ZERO
    for t in terms:
        sign = 1
        while t and t[0] in "+-":
            if t[0] == "-":
                sign = -sign
            t = t[1:]
        if not t:
            raise ValueError(f"bad term in {text!r}")
        if "*" in t:
            coef_s, root_s = t.split("*", 1)
            coef = Fraction(coef_s)
        elif t.startswith("z"):
            coef, root_s = Fraction(1), t
        else:
            coef, root_s = Fraction(t), None
        if root_s is None:
            term = CycNumber(1, (coef,), _canonical=True)
        else:
            if not root_s.startswith("z"):
                raise ValueError(f"bad root {root_s!r} in {text!r}")
            if "^" in root_s:
                n_s, k_s = root_s[1:].split("^")
                n, k = int(n_s), int(k_s)
            else:
                n, k = int(root_s[1:]), 1
            term = coef * CycNumber.zeta(n, k)
        total = total + sign * term
    return total
