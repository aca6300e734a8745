"""Sparse exact-rational multivariate polynomials and integer binary forms.

``MultiPoly`` stores a mapping from exponent tuples to nonzero ``Fraction``
coefficients.  Everything downstream (pencil determinants, conjugacy
identities, contracted-curve checks) relies on this arithmetic being exact, so
no floating point enters here.

``BinaryForm`` is the degree-tracking workhorse: a homogeneous univariate pair
form with big-integer coefficients, with primitive-PRS gcd used to cancel
common factors of iterated map compositions along a line.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping, Sequence


class MultiPoly:
    """Sparse polynomial in ``arity`` variables with Fraction coefficients.

    Terms map exponent tuples to nonzero coefficients; zero coefficients are
    never stored, so ``not p.terms`` is the zero test.
    """

    __slots__ = ("arity", "terms")

    def __init__(self, arity: int, terms: Mapping[tuple, Fraction] | None = None):
        self.arity = arity
        clean = {}
        if terms:
            for expo, coeff in terms.items():
                coeff = Fraction(coeff)
                if coeff != 0:
                    expo = tuple(int(e) for e in expo)
                    if len(expo) != arity:
                        raise ValueError(f"exponent {expo} has wrong arity (want {arity})")
                    clean[expo] = clean.get(expo, Fraction(0)) + coeff
            clean = {e: c for e, c in clean.items() if c != 0}
        self.terms = clean

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, arity: int) -> "MultiPoly":
        return cls(arity, {})

    @classmethod
    def constant(cls, arity: int, value) -> "MultiPoly":
        return cls(arity, {(0,) * arity: Fraction(value)})

    @classmethod
    def variable(cls, arity: int, index: int) -> "MultiPoly":
        expo = [0] * arity
        expo[index] = 1
        return cls(arity, {tuple(expo): Fraction(1)})

    @classmethod
    def from_string_terms(cls, arity: int, term_list: Iterable[tuple]) -> "MultiPoly":
        """Build from an iterable of (coeff, exponent-tuple) pairs."""
        return cls(arity, {tuple(e): Fraction(c) for c, e in term_list})

    # -- predicates and views ---------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(all(e == 0 for e in expo) for expo in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms.get((0,) * self.arity, Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, index: int) -> int:
        if not self.terms:
            return -1
        return max(e[index] for e in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.arity == other.arity and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == MultiPoly.constant(self.arity, other)
        return NotImplemented

    def __hash__(self):
        return hash((self.arity, frozenset(self.terms.items())))

    # -- ring operations ---------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.arity != self.arity:
                raise ValueError("arity mismatch")
            return other
        return MultiPoly.constant(self.arity, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for expo, coeff in other.terms.items():
            val = out.get(expo, Fraction(0)) + coeff
            if val == 0:
                out.pop(expo, None)
            else:
                out[expo] = val
        return MultiPoly(self.arity, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if other == 0:
                return MultiPoly.zero(self.arity)
            return MultiPoly(self.arity, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                expo = tuple(a + b for a, b in zip(e1, e2))
                val = out.get(expo, Fraction(0)) + c1 * c2
                if val == 0:
                    out.pop(expo, None)
                else:
                    out[expo] = val
        return MultiPoly(self.arity, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        result = MultiPoly.constant(self.arity, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- evaluation and substitution ---------------------------------------

    def eval(self, values: Sequence):
        """Evaluate at a point.  Works for Fractions, floats, complex, or any
        commutative ring elements supporting + and *."""
        if len(values) != self.arity:
            raise ValueError("wrong number of values")
        total = None
        for expo, coeff in self.terms.items():
            term = coeff
            for v, e in zip(values, expo):
                if e:
                    term = term * v ** e
            total = term if total is None else total + term
        if total is None:
            return Fraction(0)
        return total

    def subs(self, polys: Sequence["MultiPoly"]) -> "MultiPoly":
        """Substitute a polynomial for each variable (composition)."""
        if len(polys) != self.arity:
            raise ValueError("wrong number of substitutions")
        arity = polys[0].arity
        out = MultiPoly.zero(arity)
        power_cache = [{0: MultiPoly.constant(arity, 1)} for _ in polys]

        def powered(i, e):
            cache = power_cache[i]
            if e not in cache:
                cache[e] = powered(i, e - 1) * polys[i]
            return cache[e]

        for expo, coeff in self.terms.items():
            term = MultiPoly.constant(arity, coeff)
            for i, e in enumerate(expo):
                if e:
                    term = term * powered(i, e)
            out = out + term
        return out

    # -- integer normalization ----------------------------------------------

    def denominator_lcm(self) -> int:
        lcm = 1
        for c in self.terms.values():
            d = c.denominator
            lcm = lcm * d // gcd(lcm, d)
        return lcm

    def content(self) -> Fraction:
        """Positive rational content; sign carried by the terms."""
        if not self.terms:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = gcd(num, abs(c.numerator))
            den = den * c.denominator // gcd(den, c.denominator)
        return Fraction(num, den)

    def primitive(self) -> "MultiPoly":
        """Scale to coprime integer coefficients, leading coefficient > 0
        (in the lexicographic-largest exponent)."""
        if not self.terms:
            return self
        scaled = self * (1 / self.content())
        lead = scaled.terms[max(scaled.terms)]
        if lead < 0:
            scaled = -scaled
        return scaled

    def __repr__(self):
        if not self.terms:
            return "MultiPoly(0)"
        names = "xyzw"[: self.arity] if self.arity <= 4 else None
        parts = []
        for expo in sorted(self.terms, reverse=True):
            coeff = self.terms[expo]
            mono = "*".join(
                (f"{names[i] if names else 'x%d' % i}" + (f"^{e}" if e > 1 else ""))
                for i, e in enumerate(expo)
                if e
            )
            parts.append(f"{coeff}" + (f"*{mono}" if mono else ""))
        return "MultiPoly(" + " + ".join(parts) + ")"


# ---------------------------------------------------------------------------
# Integer univariate helpers (shared by BinaryForm and the PRS gcd)
# ---------------------------------------------------------------------------


def _strip(coeffs: list) -> list:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _content_int(coeffs: Sequence[int]) -> int:
    g = 0
    for c in coeffs:
        g = gcd(g, abs(c))
        if g == 1:
            break
    return g


def _primitive_int(coeffs: Sequence[int]) -> list:
    g = _content_int(coeffs)
    if g == 0:
        return []
    if coeffs[-1] < 0:
        g = -g
    return [c // g for c in coeffs]


def _poly_mul_int(a: Sequence[int], b: Sequence[int]) -> list:
    """Product of integer coefficient lists.

    Large products go through Kronecker substitution: both factors are
    packed into single big integers (one coefficient per fixed-width digit),
    multiplied once, and the product digits are read back.  CPython big-int
    multiplication is subquadratic, which beats the schoolbook loop by a
    wide margin on the degree-several-hundred forms produced by iterated
    composition.  Negative coefficients are handled by splitting into
    positive and negative parts.
    """
    if not a or not b:
        return []
    if min(len(a), len(b)) < 16:
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai:
                for j, bj in enumerate(b):
                    if bj:
                        out[i + j] += ai * bj
        return out
    max_a = max(abs(c) for c in a)
    max_b = max(abs(c) for c in b)
    bound = max_a * max_b * min(len(a), len(b))
    width = bound.bit_length() + 1
    ap, an = _pack_split(a, width)
    bp, bn = _pack_split(b, width)
    pos = ap * bp + an * bn
    neg = ap * bn + an * bp
    return _unpack_diff(pos, neg, width, len(a) + len(b) - 1)


def _pack_split(coeffs: Sequence[int], width: int) -> tuple:
    pos = 0
    neg = 0
    for i, c in enumerate(coeffs):
        if c > 0:
            pos |= c << (i * width)
        elif c < 0:
            neg |= (-c) << (i * width)
    return pos, neg


def _unpack_diff(pos: int, neg: int, width: int, count: int) -> list:
    mask = (1 << width) - 1
    out = [0] * count
    for i in range(count):
        shift = i * width
        out[i] = ((pos >> shift) & mask) - ((neg >> shift) & mask)
    return out


def _pseudo_rem(f: list, g: list) -> list:
    """Pseudo-remainder of integer polynomials, deg f >= deg g >= 0."""
    f = list(f)
    dg = len(g) - 1
    lg = g[-1]
    while len(f) - 1 >= dg and f:
        df = len(f) - 1
        lead = f[-1]
        f = [c * lg for c in f]
        shift = df - dg
        for i, gi in enumerate(g):
            f[i + shift] -= lead * gi
        f = _strip(f)
    return f


def poly_gcd_int(f: Sequence[int], g: Sequence[int]) -> list:
    """Gcd of two integer polynomials (coefficient lists, lowest degree
    first).

    Large inputs go through modular images recombined by CRT and verified by
    exact trial division; the primitive-PRS chain is the small-case path and
    the fallback when the prime budget is exhausted.
    """
    f = _strip(list(f))
    g = _strip(list(g))
    if not f:
        return _primitive_int(g)
    if not g:
        return _primitive_int(f)
    cf, cg = _content_int(f), _content_int(g)
    c = gcd(cf, cg)
    f = [x // cf for x in f]
    g = [x // cg for x in g]
    if len(f) < len(g):
        f, g = g, f
    result = None
    if len(g) > 24:
        result = _try_modular_gcd(f, g)
    if result is None:
        result = _prs_gcd(f, g)
    return [x * c for x in result] if c > 1 else result


def _prs_gcd(f: list, g: list) -> list:
    """Primitive pseudo-remainder chain on primitive inputs."""
    while True:
        r = _pseudo_rem(f, g)
        if not r:
            break
        r = _primitive_int(r)
        f, g = g, r
    return _primitive_int(g)


def _is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for n < 3.3e24."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes_below_2_31(count: int) -> tuple:
    out = []
    n = 2 ** 31 - 1
    while len(out) < count:
        if _is_prime(n):
            out.append(n)
        n -= 2
    return tuple(out)


_GCD_PRIMES = _primes_below_2_31(96)


def _rem_mod_p(f, g, p: int):
    """Remainder of numpy int64 coefficient vectors mod a sub-2^31 prime
    (products stay below 2^62, inside int64)."""
    import numpy as np

    dg = len(g) - 1
    inv = pow(int(g[-1]), p - 2, p)
    f = f.copy()
    top = len(f)
    while top - 1 >= dg:
        lead = int(f[top - 1])
        if lead:
            factor = lead * inv % p
            shift = top - 1 - dg
            f[shift: top] = (f[shift: top] - factor * g) % p
        top -= 1
        while top and not f[top - 1]:
            top -= 1
    return f[:top]


def _gcd_mod_p(f: Sequence[int], g: Sequence[int], p: int) -> list:
    import numpy as np

    a = np.array([c % p for c in f], dtype=np.int64)
    b = np.array([c % p for c in g], dtype=np.int64)
    a = a[: _top(a)]
    b = b[: _top(b)]
    while len(b):
        a, b = b, _rem_mod_p(a, b, p)
    inv = pow(int(a[-1]), p - 2, p)
    return [int(c) * inv % p for c in a]


def _top(arr) -> int:
    n = len(arr)
    while n and not arr[n - 1]:
        n -= 1
    return n


def _crt_list(res1: list, m1: int, res2: list, p2: int) -> list:
    # combine coefficient lists x = res1 mod m1, x = res2 mod p2
    inv = pow(m1 % p2, p2 - 2, p2)
    return [r1 + m1 * ((r2 - r1) % p2 * inv % p2) for r1, r2 in zip(res1, res2)]


def _try_modular_gcd(f: list, g: list) -> list | None:
    """Gcd of primitive integer polynomials by modular images + CRT, verified
    by exact trial division; None when the prime budget runs out.

    Images are accumulated prime by prime (discarding unlucky primes whose
    gcd degree is too high) and the trial division runs on an exponential
    schedule, since each attempt on big inputs is itself costly.
    """
    lc = gcd(abs(f[-1]), abs(g[-1]))
    best_deg = None
    combined: list = []
    modulus = 1
    next_check = 1
    used = 0
    for p in _GCD_PRIMES:
        if f[-1] % p == 0 or g[-1] % p == 0:
            continue
        img = _gcd_mod_p(f, g, p)
        deg = len(img) - 1
        if deg == 0:
            return [1]
        if best_deg is None or deg < best_deg:
            best_deg = deg
            combined = [lc * c % p for c in img]
            modulus = p
            used = 1
            next_check = 1
        elif deg == best_deg:
            combined = _crt_list(combined, modulus, [lc * c % p for c in img], p)
            modulus *= p
            used += 1
        else:
            continue  # unlucky prime
        if used < next_check:
            continue
        next_check *= 2
        lifted = [c - modulus if c > modulus // 2 else c for c in combined]
        cand = _primitive_int(lifted)
        if not cand or not cand[-1]:
            continue
        try:
            poly_divexact_int(f, cand)
            poly_divexact_int(g, cand)
            return cand
        except ValueError:
            continue
    return None


def poly_divexact_int(f: Sequence[int], g: Sequence[int]) -> list:
    """Exact division of integer polynomials; raises if not divisible."""
    f = _strip(list(f))
    g = _strip(list(g))
    if not g:
        raise ZeroDivisionError("division by zero polynomial")
    if not f:
        return []
    q = [0] * (len(f) - len(g) + 1)
    r = f
    dg = len(g) - 1
    lg = g[-1]
    while r and len(r) - 1 >= dg:
        dr = len(r) - 1
        lead = r[-1]
        if lead % lg:
            raise ValueError("not an exact polynomial division")
        qq = lead // lg
        q[dr - dg] = qq
        for i, gi in enumerate(g):
            r[i + dr - dg] -= qq * gi
        r = _strip(r)
    if r:
        raise ValueError("not an exact polynomial division")
    return q


class BinaryForm:
    """Homogeneous form in (s, t) with integer coefficients.

    ``coeffs[k]`` is the coefficient of ``s^(degree-k) t^k``.  The zero form
    has ``degree == -1`` and an empty coefficient list.
    """

    __slots__ = ("degree", "coeffs")

    def __init__(self, coeffs: Sequence[int], degree: int | None = None):
        coeffs = [int(c) for c in coeffs]
        if degree is None:
            degree = len(coeffs) - 1
        if degree >= 0 and len(coeffs) != degree + 1:
            raise ValueError("coefficient list does not match degree")
        if all(c == 0 for c in coeffs):
            self.degree = -1
            self.coeffs = []
        else:
            self.degree = degree
            self.coeffs = coeffs

    def is_zero(self) -> bool:
        return self.degree < 0

    def __eq__(self, other):
        return (
            isinstance(other, BinaryForm)
            and self.degree == other.degree
            and self.coeffs == other.coeffs
        )

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        if self.is_zero() or other.is_zero():
            return BinaryForm([], -1)
        return BinaryForm(
            _strip_to_deg(_poly_mul_int(self.coeffs, other.coeffs), self.degree + other.degree),
            self.degree + other.degree,
        )

    def __pow__(self, n: int) -> "BinaryForm":
        result = BinaryForm([1], 0)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __add__(self, other: "BinaryForm") -> "BinaryForm":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        return BinaryForm(
            [a + b for a, b in zip(self.coeffs, other.coeffs)], self.degree
        )

    def scale(self, k: int) -> "BinaryForm":
        if k == 0 or self.is_zero():
            return BinaryForm([], -1)
        return BinaryForm([c * k for c in self.coeffs], self.degree)

    def primitive(self) -> "BinaryForm":
        if self.is_zero():
            return self
        g = _content_int(self.coeffs)
        return BinaryForm([c // g for c in self.coeffs], self.degree)

    def eval(self, s, t):
        acc = 0
        for k, c in enumerate(self.coeffs):
            if c:
                acc += c * s ** (self.degree - k) * t ** k
        return acc


def _strip_to_deg(coeffs: list, degree: int) -> list:
    coeffs = list(coeffs) + [0] * (degree + 1 - len(coeffs))
    return coeffs[: degree + 1]


def binary_forms_gcd(forms: Sequence[BinaryForm]) -> BinaryForm:
    """Gcd of binary forms of a common degree.

    Factors of t and s correspond to leading/trailing zero coefficients; the
    middle part is a univariate primitive-PRS gcd.
    """
    forms = [f for f in forms if not f.is_zero()]
    if not forms:
        return BinaryForm([], -1)
    t_ord = min(_leading_zeros(f.coeffs) for f in forms)
    s_ord = min(_trailing_zeros(f.coeffs) for f in forms)
    cores = [f.coeffs[_leading_zeros(f.coeffs): len(f.coeffs) - _trailing_zeros(f.coeffs)]
             for f in forms]
    g = cores[0]
    for core in cores[1:]:
        g = poly_gcd_int(g, core)
        if len(g) == 1:
            g = [1]
            break
    # g is a polynomial in t of the core; rebuild a form of matching degree
    core_deg = len(g) - 1
    coeffs = [0] * t_ord + list(g) + [0] * s_ord
    return BinaryForm(coeffs, t_ord + core_deg + s_ord)


def binary_form_divexact(f: BinaryForm, g: BinaryForm) -> BinaryForm:
    if g.is_zero():
        raise ZeroDivisionError
    if f.is_zero():
        return f
    q = poly_divexact_int(f.coeffs, g.coeffs)
    return BinaryForm(_strip_to_deg(q, f.degree - g.degree), f.degree - g.degree)


def _leading_zeros(coeffs: Sequence[int]) -> int:
    n = 0
    for c in coeffs:
        if c != 0:
            break
        n += 1
    return n


def _trailing_zeros(coeffs: Sequence[int]) -> int:
    n = 0
    for c in reversed(coeffs):
        if c != 0:
            break
        n += 1
    return n
