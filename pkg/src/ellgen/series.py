"""Exact arithmetic kernel.

Three carriers live here:

* :class:`SparseLaurent` -- Laurent polynomials in ``Yh`` (= y^(1/2)), ``U``
  and ``V`` with Python integer coefficients.
* :class:`RatFunc` -- a quotient of two ``SparseLaurent`` values.  No GCD is
  ever taken; equality is decided by cross-multiplication.
* :class:`QSeries` -- a truncated power series in ``q`` with a rational
  exponent offset, over any of the above or over ``complex``.

Everything is immutable.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import NonUnitLeadingCoefficient, OffsetMismatch, ZeroDenominator

VARIABLES = ("Yh", "U", "V")

# Exponent triples are packed into one int so that monomial products are a
# single integer addition.  Each field holds exponent + _BIAS in _WIDTH bits.
_WIDTH = 20
_BIAS = 1 << (_WIDTH - 1)
_MASK = (1 << _WIDTH) - 1
_BIAS_KEY = (_BIAS << (2 * _WIDTH)) | (_BIAS << _WIDTH) | _BIAS
_ZERO_KEY = _BIAS_KEY


def _pack(e: Sequence[int]) -> int:
    ey, eu, ev = e
    if max(abs(ey), abs(eu), abs(ev)) >= _BIAS:
        raise OverflowError(f"exponent triple {tuple(e)} out of range")
    return ((ey + _BIAS) << (2 * _WIDTH)) | ((eu + _BIAS) << _WIDTH) | (ev + _BIAS)


def _unpack(k: int) -> tuple[int, int, int]:
    return (
        ((k >> (2 * _WIDTH)) & _MASK) - _BIAS,
        ((k >> _WIDTH) & _MASK) - _BIAS,
        (k & _MASK) - _BIAS,
    )


class SparseLaurent:
    """Multivariate Laurent polynomial over the integers.

    >>> Yh, U, V = SparseLaurent.gens()
    >>> (1 - U) * (1 + U)
    SparseLaurent('1 - U^2')
    """

    __slots__ = ("_t",)

    def __init__(self, terms: Mapping[tuple[int, int, int], int] | None = None):
        packed: dict[int, int] = {}
        if terms:
            for e, c in terms.items():
                c = int(c)
                if c:
                    k = _pack(e)
                    packed[k] = packed.get(k, 0) + c
            packed = {k: c for k, c in packed.items() if c}
        self._t = packed

    @classmethod
    def _raw(cls, packed: dict[int, int]) -> "SparseLaurent":
        obj = cls.__new__(cls)
        obj._t = packed
        return obj

    # constructors

    @classmethod
    def const(cls, c: int) -> "SparseLaurent":
        return cls._raw({_ZERO_KEY: int(c)} if c else {})

    @classmethod
    def monomial(cls, ey: int = 0, eu: int = 0, ev: int = 0, coeff: int = 1) -> "SparseLaurent":
        return cls._raw({_pack((ey, eu, ev)): int(coeff)} if coeff else {})

    @classmethod
    def gens(cls) -> tuple["SparseLaurent", "SparseLaurent", "SparseLaurent"]:
        return cls.monomial(1, 0, 0), cls.monomial(0, 1, 0), cls.monomial(0, 0, 1)

    @classmethod
    def coerce(cls, x) -> "SparseLaurent":
        if isinstance(x, SparseLaurent):
            return x
        if isinstance(x, int):
            return cls.const(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to SparseLaurent")

    # inspection

    @property
    def terms(self) -> dict[tuple[int, int, int], int]:
        """Exponent triple -> coefficient, in canonical (lexicographic) order."""
        return {e: c for e, c in sorted((_unpack(k), c) for k, c in self._t.items())}

    def __len__(self) -> int:
        return len(self._t)

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_one(self) -> bool:
        return self._t == {_ZERO_KEY: 1}

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def is_unit(self) -> bool:
        """True for ``+-1`` times a monomial, the units of Z[Yh^+-1, U^+-1, V^+-1]."""
        return len(self._t) == 1 and abs(next(iter(self._t.values()))) == 1

    def inverse(self) -> "SparseLaurent":
        if not self.is_unit():
            raise NonUnitLeadingCoefficient(f"{self} is not a unit")
        (k, c), = self._t.items()
        e = _unpack(k)
        return SparseLaurent.monomial(-e[0], -e[1], -e[2], c)

    def exponents(self, var: int = 0) -> set[int]:
        return {_unpack(k)[var] for k in self._t}

    # arithmetic

    def __neg__(self) -> "SparseLaurent":
        return SparseLaurent._raw({k: -c for k, c in self._t.items()})

    def __add__(self, other) -> "SparseLaurent":
        if isinstance(other, int):
            other = SparseLaurent.const(other)
        elif not isinstance(other, SparseLaurent):
            return NotImplemented
        if len(self._t) < len(other._t):
            small, big = self._t, other._t
        else:
            small, big = other._t, self._t
        out = dict(big)
        for k, c in small.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                del out[k]
        return SparseLaurent._raw(out)

    __radd__ = __add__

    def __sub__(self, other) -> "SparseLaurent":
        if isinstance(other, int):
            other = SparseLaurent.const(other)
        elif not isinstance(other, SparseLaurent):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "SparseLaurent":
        if isinstance(other, int):
            return SparseLaurent.const(other) - self
        return NotImplemented

    def __mul__(self, other) -> "SparseLaurent":
        if isinstance(other, int):
            if not other:
                return SparseLaurent()
            return SparseLaurent._raw({k: c * other for k, c in self._t.items()})
        if not isinstance(other, SparseLaurent):
            return NotImplemented
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "SparseLaurent":
        if n < 0:
            return self.inverse() ** (-n)
        out = SparseLaurent.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = SparseLaurent.const(other)
        if not isinstance(other, SparseLaurent):
            return NotImplemented
        return self._t == other._t

    def __hash__(self) -> int:
        return hash(frozenset(self._t.items()))

    # transformations

    def remap(self, matrix: Sequence[Sequence[int]]) -> "SparseLaurent":
        """Substitute monomials linearly: new exponent = matrix @ old exponent.

        ``remap(((1,0,0),(0,-1,0),(0,0,-1)))`` sends U -> 1/U and V -> 1/V.
        """
        out: dict[tuple[int, int, int], int] = {}
        for k, c in self._t.items():
            e = _unpack(k)
            ne = tuple(sum(row[i] * e[i] for i in range(3)) for row in matrix)
            out[ne] = out.get(ne, 0) + c
        return SparseLaurent(out)

    def evaluate(self, yh: complex, u: complex = 1.0, v: complex = 1.0) -> complex:
        total = 0j
        for (ey, eu, ev), c in self.terms.items():
            total += c * yh**ey * u**eu * v**ev
        return total

    def __str__(self) -> str:
        if not self._t:
            return "0"
        pieces = []
        for (ey, eu, ev), c in self.terms.items():
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(VARIABLES, (ey, eu, ev))
                if e
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            pieces.append((sign, body))
        first_sign, first = pieces[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in pieces[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"SparseLaurent('{self}')"


def poly_mul(a: SparseLaurent, b: SparseLaurent) -> SparseLaurent:
    """Exact product of two Laurent polynomials."""
    ta, tb = a._t, b._t
    if not ta or not tb:
        return SparseLaurent()
    if len(ta) > len(tb):
        ta, tb = tb, ta
    out: dict[int, int] = {}
    get = out.get
    for ka, ca in ta.items():
        base = ka - _BIAS_KEY
        for kb, cb in tb.items():
            k = base + kb
            out[k] = get(k, 0) + ca * cb
    return SparseLaurent._raw({k: c for k, c in out.items() if c})


class RatFunc:
    """Quotient ``num/den`` of Laurent polynomials, never reduced.

    Two quotients are equal when ``a*d == c*b``.  Sums and products take a
    shortcut when denominators coincide structurally or are 1, which keeps
    the growth linear for the series this package builds.
    """

    __slots__ = ("num", "den")
    __hash__ = None  # equality is not structural

    def __init__(self, num, den=1):
        num = SparseLaurent.coerce(num)
        den = SparseLaurent.coerce(den)
        if not den:
            raise ZeroDenominator("RatFunc denominator is the zero polynomial")
        self.num = num
        self.den = den

    @classmethod
    def coerce(cls, x) -> "RatFunc":
        if isinstance(x, RatFunc):
            return x
        return cls(x)

    def __bool__(self) -> bool:
        return bool(self.num)

    def __neg__(self) -> "RatFunc":
        return RatFunc(-self.num, self.den)

    def __add__(self, other) -> "RatFunc":
        if isinstance(other, (int, SparseLaurent)):
            other = RatFunc(other)
        elif not isinstance(other, RatFunc):
            return NotImplemented
        return ratfunc_add(self, other)

    __radd__ = __add__

    def __sub__(self, other) -> "RatFunc":
        if isinstance(other, (int, SparseLaurent)):
            other = RatFunc(other)
        elif not isinstance(other, RatFunc):
            return NotImplemented
        return ratfunc_add(self, -other)

    def __rsub__(self, other) -> "RatFunc":
        if isinstance(other, (int, SparseLaurent)):
            return RatFunc(other) - self
        return NotImplemented

    def __mul__(self, other) -> "RatFunc":
        if isinstance(other, (int, SparseLaurent)):
            return RatFunc(self.num * other, self.den)
        if not isinstance(other, RatFunc):
            return NotImplemented
        return ratfunc_mul(self, other)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDenominator("inverse of zero RatFunc")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other) -> "RatFunc":
        return self * RatFunc.coerce(other).inverse()

    def __rtruediv__(self, other) -> "RatFunc":
        return RatFunc.coerce(other) * self.inverse()

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, SparseLaurent)):
            other = RatFunc(other)
        if not isinstance(other, RatFunc):
            return NotImplemented
        if self.den == other.den:
            return self.num == other.num
        return self.num * other.den == other.num * self.den

    def evaluate(self, yh: complex, u: complex = 1.0, v: complex = 1.0) -> complex:
        return self.num.evaluate(yh, u, v) / self.den.evaluate(yh, u, v)

    def remap(self, matrix) -> "RatFunc":
        return RatFunc(self.num.remap(matrix), self.den.remap(matrix))

    def __str__(self) -> str:
        if self.den.is_one():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self) -> str:
        return f"RatFunc('{self}')"


def ratfunc_add(a: RatFunc, b: RatFunc) -> RatFunc:
    if a.den == b.den:
        return RatFunc(a.num + b.num, a.den)
    if b.den.is_one():
        return RatFunc(a.num + b.num * a.den, a.den)
    if a.den.is_one():
        return RatFunc(a.num * b.den + b.num, b.den)
    return RatFunc(a.num * b.den + b.num * a.den, a.den * b.den)


def ratfunc_mul(a: RatFunc, b: RatFunc) -> RatFunc:
    if not a.num or not b.num:
        return RatFunc(0)
    if a.den.is_one():
        den = b.den
    elif b.den.is_one():
        den = a.den
    else:
        den = a.den * b.den
    return RatFunc(a.num * b.num, den)


def ratfunc_sum(items: Iterable[RatFunc]) -> RatFunc:
    """Sum many quotients, adding numerators over shared denominators first."""
    groups: list[list] = []
    for r in items:
        r = RatFunc.coerce(r)
        for g in groups:
            if g[0] == r.den:
                g[1] = g[1] + r.num
                break
        else:
            groups.append([r.den, r.num])
    total = RatFunc(0)
    for den, num in groups:
        total = total + RatFunc(num, den)
    return total


def _ring_inverse(c):
    if isinstance(c, SparseLaurent):
        return c.inverse()
    if isinstance(c, RatFunc):
        return c.inverse()
    if isinstance(c, int):
        if c in (1, -1):
            return c
        raise NonUnitLeadingCoefficient(f"{c} is not a unit in Z")
    if c == 0:
        raise NonUnitLeadingCoefficient("zero leading coefficient")
    return 1 / c


def _is_zero(c) -> bool:
    return not c


class QSeries:
    """Truncated series ``q^offset * sum_{k < trunc} coeffs[k] q^k + O(q^(offset+trunc))``."""

    __slots__ = ("offset", "coeffs")
    __hash__ = None

    def __init__(self, coeffs: Sequence, offset=0, trunc: int | None = None):
        coeffs = list(coeffs)
        if trunc is None:
            trunc = len(coeffs)
        if trunc < 1:
            raise ValueError("trunc must be >= 1")
        if len(coeffs) > trunc:
            coeffs = coeffs[:trunc]
        elif len(coeffs) < trunc:
            if not coeffs:
                raise ValueError("need at least one coefficient to infer the ring")
            zero = coeffs[0] * 0
            coeffs = coeffs + [zero] * (trunc - len(coeffs))
        self.coeffs = tuple(coeffs)
        self.offset = Fraction(offset)

    @property
    def trunc(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int):
        return self.coeffs[k]

    @classmethod
    def from_terms(cls, terms: Mapping[int, object], trunc: int, zero, offset=0) -> "QSeries":
        """Series with the given {q-power: coefficient} entries, others ``zero``."""
        coeffs = [zero] * trunc
        for k, c in terms.items():
            if 0 <= k < trunc:
                coeffs[k] = coeffs[k] + c
        return cls(coeffs, offset, trunc)

    def map(self, fn: Callable) -> "QSeries":
        return QSeries([fn(c) for c in self.coeffs], self.offset)

    def scale(self, c) -> "QSeries":
        return QSeries([c * a for a in self.coeffs], self.offset)

    def shift(self, by) -> "QSeries":
        """Multiply by q^by (pure offset change)."""
        return QSeries(self.coeffs, self.offset + Fraction(by))

    def __neg__(self) -> "QSeries":
        return QSeries([-c for c in self.coeffs], self.offset)

    def __add__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        return qseries_add(self, other)

    def __sub__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            return NotImplemented
        return qseries_add(self, -other)

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return qseries_mul(self, other)
        return self.scale(other)

    def __rmul__(self, other) -> "QSeries":
        return self.scale(other)

    def __eq__(self, other) -> bool:
        """Coefficient-wise equality (cross-multiplied for RatFunc) at equal offset and trunc."""
        if not isinstance(other, QSeries):
            return NotImplemented
        if self.offset != other.offset or self.trunc != other.trunc:
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def evaluate(self, q_offset_value: complex, q: complex, coeff_eval: Callable = lambda c: c) -> complex:
        """Numeric value given q and the already-chosen branch of q^offset."""
        total = 0j
        qk = 1 + 0j
        for c in self.coeffs:
            total += coeff_eval(c) * qk
            qk *= q
        return q_offset_value * total

    def __repr__(self) -> str:
        head = ", ".join(str(c) for c in self.coeffs[:3])
        more = ", ..." if self.trunc > 3 else ""
        return f"QSeries(offset={self.offset}, trunc={self.trunc}, [{head}{more}])"


def qseries_add(a: QSeries, b: QSeries) -> QSeries:
    diff = a.offset - b.offset
    if diff.denominator != 1:
        raise OffsetMismatch(f"offsets {a.offset} and {b.offset} differ by a non-integer")
    if diff < 0:
        a, b = b, a
        diff = -diff
    d = int(diff)
    # b has the lower offset; a is shifted up by d
    lo = b.offset
    end = min(b.trunc, a.trunc + d)
    coeffs = list(b.coeffs[:end])
    for k in range(d, end):
        coeffs[k] = coeffs[k] + a.coeffs[k - d]
    return QSeries(coeffs, lo, end)


def qseries_mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product truncated at the smaller trunc; offsets add."""
    n = min(a.trunc, b.trunc)
    ac, bc = a.coeffs, b.coeffs
    nz_a = [i for i in range(n) if not _is_zero(ac[i])]
    nz_b = [j for j in range(n) if not _is_zero(bc[j])]
    zero = ac[0] * 0
    out: list = [None] * n
    for i in nz_a:
        for j in nz_b:
            k = i + j
            if k >= n:
                break
            p = ac[i] * bc[j]
            out[k] = p if out[k] is None else out[k] + p
    coeffs = [zero if c is None else c for c in out]
    return QSeries(coeffs, a.offset + b.offset, n)


def qseries_invert(a: QSeries) -> QSeries:
    """Multiplicative inverse; the q^0 coefficient must be a unit of the ring."""
    c0 = a.coeffs[0]
    if _is_zero(c0):
        raise NonUnitLeadingCoefficient("leading coefficient is zero")
    try:
        inv0 = _ring_inverse(c0)
    except (NonUnitLeadingCoefficient, ZeroDenominator) as exc:
        raise NonUnitLeadingCoefficient(str(exc)) from exc
    n = a.trunc
    out = [inv0]
    for k in range(1, n):
        acc = None
        for j in range(1, k + 1):
            if _is_zero(a.coeffs[j]):
                continue
            p = a.coeffs[j] * out[k - j]
            acc = p if acc is None else acc + p
        out.append(inv0 * 0 if acc is None else -(inv0 * acc))
    return QSeries(out, -a.offset, n)


def qseries_prod(factors: Iterable[QSeries]) -> QSeries:
    it = iter(factors)
    acc = next(it)
    for f in it:
        acc = qseries_mul(acc, f)
    return acc


def one_minus(x, k: int, trunc: int) -> QSeries:
    """The series ``1 - x q^k`` (k >= 0) over the ring of ``x``."""
    one = x * 0 + 1
    if k == 0:
        return QSeries([one - x], 0, trunc)
    return QSeries.from_terms({0: one, k: -x}, trunc, x * 0)


def geometric(x, k: int, trunc: int) -> QSeries:
    """``1/(1 - x q^k)`` expanded as ``sum_j x^j q^(jk)``, k >= 1."""
    if k < 1:
        raise ValueError("geometric expansion needs k >= 1")
    one = x * 0 + 1
    terms = {}
    p = one
    for j in range(0, (trunc - 1) // k + 1):
        terms[j * k] = p
        p = p * x
    return QSeries.from_terms(terms, trunc, x * 0)

