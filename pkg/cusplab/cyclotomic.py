from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple, Union

import mpmath
from sympy import Matrix, Poly, Rational, Symbol, divisors, mobius, totient

from cusplab import config
from cusplab.exceptions import ConductorOverflowError, CyclotomicZeroDivisionError, EmbeddingError, InputError

_x = Symbol('x')


def _check_conductor(n: int) -> None:
    if n < 1:
        raise InputError(f"Conductor must be a positive integer, got {n}")
    bound = config.max_conductor()
    if n > bound:
        raise ConductorOverflowError(f"Conductor {n} exceeds the configured bound {bound} (CUSPLAB_MAX_CONDUCTOR)")


@lru_cache(maxsize=None)
def cyclotomic_coeffs(n: int) -> Tuple[int, ...]:
    """
    Integer coefficients of the n-th cyclotomic polynomial, constant term first.

    The polynomial is assembled once per conductor as the Moebius product of the factors x^d - 1
    over the divisors d of n.

    Parameters:
    n (int): The conductor.

    Returns:
    tuple: Coefficients c_0, ..., c_phi with c_phi = 1.
    """
    numerator = Poly(1, _x)
    denominator = Poly(1, _x)
    for d in divisors(n):
        mu = int(mobius(n // d))
        if mu == 1:
            numerator = numerator * Poly(_x**d - 1, _x)
        elif mu == -1:
            denominator = denominator * Poly(_x**d - 1, _x)
    phi = numerator.exquo(denominator)
    return tuple(int(c) for c in reversed(phi.all_coeffs()))


def degree(n: int) -> int:
    return len(cyclotomic_coeffs(n)) - 1


@lru_cache(maxsize=None)
def _trace_weights(n: int) -> Tuple[Fraction, ...]:
    # Tr(zeta_n^j) / phi(n) = mu(m) / phi(m) with m = n / gcd(n, j); independent of the ambient field.
    weights = []
    for j in range(degree(n)):
        m = n // gcd(n, j)
        weights.append(Fraction(int(mobius(m)), int(totient(m))))
    return tuple(weights)


@lru_cache(maxsize=None)
def _units(n: int) -> Tuple[int, ...]:
    return tuple(k for k in range(1, n + 1) if gcd(k, n) == 1)


def _reduce(vec: Sequence[int], n: int) -> Tuple[int, ...]:
    """Reduce an integer vector in powers of zeta_n to the power basis of length phi(n)."""
    phi_c = cyclotomic_coeffs(n)
    deg = len(phi_c) - 1
    if len(vec) > n:
        work = [0] * n
        for k, c in enumerate(vec):
            if c:
                work[k % n] += c
    else:
        work = list(vec)
    for k in range(len(work) - 1, deg - 1, -1):
        c = work[k]
        if c:
            base = k - deg
            for j in range(deg):
                if phi_c[j]:
                    work[base + j] -= c * phi_c[j]
            work[k] = 0
    if len(work) < deg:
        work.extend([0] * (deg - len(work)))
    return tuple(work[:deg])


class CycNum:
    """
    Exact element of the cyclotomic field Q(zeta_n).

    Values are stored as an integer numerator vector in the power basis zeta^0, ..., zeta^(phi(n)-1)
    over a positive common denominator, reduced modulo the n-th cyclotomic polynomial, so equal values
    of the same conductor have identical storage. Values of different conductors are compared after
    embedding both into the field of the least common multiple.
    """

    __slots__ = ('_n', '_num', '_den', '_hash')

    def __init__(self, n: int, coeffs: Union[Sequence, Mapping[int, object]] = ()):
        """
        Parameters:
        n (int): The conductor.
        coeffs (sequence or dict): Rational coefficients of zeta_n^k. A sequence is read as the
            coefficients of k = 0, 1, ...; a dict maps exponents (any integers) to coefficients.
        """
        _check_conductor(n)
        items = coeffs.items() if isinstance(coeffs, Mapping) else enumerate(coeffs)
        fracs = [(k % n, Fraction(c)) for k, c in items]
        den = 1
        for _, c in fracs:
            den = lcm(den, c.denominator)
        vec = [0] * n
        for k, c in fracs:
            vec[k] += c.numerator * (den // c.denominator)
        self._init(n, _reduce(vec, n), den)

    def _init(self, n: int, num: Tuple[int, ...], den: int) -> None:
        if den < 0:
            num = tuple(-c for c in num)
            den = -den
        g = gcd(den, *num)
        if g == 0 or not any(num):
            num = (0,) * len(num)
            den = 1
        elif g != 1:
            num = tuple(c // g for c in num)
            den //= g
        self._n = n
        self._num = num
        self._den = den
        self._hash = None

    @classmethod
    def _make(cls, n: int, num: Tuple[int, ...], den: int) -> 'CycNum':
        obj = cls.__new__(cls)
        obj._init(n, num, den)
        return obj

    # -- accessors -------------------------------------------------------

    @property
    def conductor(self) -> int:
        return self._n

    @property
    def coeffs(self) -> Tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    @property
    def numerators(self) -> Tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def is_zero(self) -> bool:
        return not any(self._num)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise InputError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    # -- embedding -------------------------------------------------------

    def _lift(self, m: int) -> 'CycNum':
        if m == self._n:
            return self
        step = m // self._n
        vec = [0] * m
        for j, c in enumerate(self._num):
            vec[j * step] = c
        return CycNum._make(m, _reduce(vec, m), self._den)

    def embed(self, m: int) -> 'CycNum':
        """
        Re-express the value in Q(zeta_m).

        Parameters:
        m (int): Target conductor, a multiple of the current conductor.

        Returns:
        CycNum: The same value with conductor m.
        """
        if m % self._n:
            raise EmbeddingError(f"Cannot embed conductor {self._n} into conductor {m}")
        _check_conductor(m)
        return self._lift(m)

    @staticmethod
    def _align(a: 'CycNum', b: 'CycNum') -> Tuple['CycNum', 'CycNum']:
        if a._n == b._n:
            return a, b
        m = lcm(a._n, b._n)
        return a._lift(m), b._lift(m)

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(value) -> Optional['CycNum']:
        if isinstance(value, CycNum):
            return value
        if isinstance(value, (int, Fraction)):
            return rational(value)
        return None

    def __add__(self, other):
        other = CycNum._coerce(other)
        if other is None:
            return NotImplemented
        a, b = CycNum._align(self, other)
        if a._den == b._den:
            return CycNum._make(a._n, tuple(x + y for x, y in zip(a._num, b._num)), a._den)
        return CycNum._make(a._n, tuple(x * b._den + y * a._den for x, y in zip(a._num, b._num)), a._den * b._den)

    __radd__ = __add__

    def __neg__(self) -> 'CycNum':
        return CycNum._make(self._n, tuple(-c for c in self._num), self._den)

    def __sub__(self, other):
        other = CycNum._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = CycNum._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = CycNum._coerce(other)
        if other is None:
            return NotImplemented
        a, b = CycNum._align(self, other)
        if a._n <= 2:
            return CycNum._make(a._n, (a._num[0] * b._num[0],), a._den * b._den)
        if not b._num[1:]:
            s = b._num[0]
            return CycNum._make(a._n, tuple(c * s for c in a._num), a._den * b._den)
        if not a._num[1:]:
            s = a._num[0]
            return CycNum._make(a._n, tuple(c * s for c in b._num), a._den * b._den)
        prod = [0] * (2 * len(a._num) - 1)
        for i, x in enumerate(a._num):
            if x:
                for j, y in enumerate(b._num):
                    if y:
                        prod[i + j] += x * y
        return CycNum._make(a._n, _reduce(prod, a._n), a._den * b._den)

    __rmul__ = __mul__

    def galois(self, k: int) -> 'CycNum':
        """
        Apply the Galois automorphism zeta_n -> zeta_n^k.

        Parameters:
        k (int): An integer prime to the conductor.

        Returns:
        CycNum: The conjugate value.
        """
        n = self._n
        if gcd(k, n) != 1:
            raise InputError(f"Exponent {k} is not a unit modulo {n}")
        if n <= 2:
            return self
        vec = [0] * n
        for j, c in enumerate(self._num):
            if c:
                vec[(j * k) % n] += c
        return CycNum._make(n, _reduce(vec, n), self._den)

    def conj(self) -> 'CycNum':
        return self.galois(-1)

    def norm(self) -> Fraction:
        """Field norm from Q(zeta_n) down to Q."""
        if self._n <= 2:
            return Fraction(self._num[0], self._den)
        total = self
        for k in _units(self._n)[1:]:
            total = total * self.galois(k)
        return total.to_fraction()

    def inverse(self) -> 'CycNum':
        if self.is_zero():
            raise CyclotomicZeroDivisionError("Division by zero in a cyclotomic field")
        if self._n <= 2:
            return CycNum._make(self._n, (self._den,), self._num[0])
        others = None
        for k in _units(self._n)[1:]:
            conjugate = self.galois(k)
            others = conjugate if others is None else others * conjugate
        norm = (self * others).to_fraction()
        return others * (1 / norm)

    def __truediv__(self, other):
        other = CycNum._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = CycNum._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e: int) -> 'CycNum':
        if e < 0:
            return self.inverse() ** (-e)
        result = rational(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result if result._n == self._n else result._lift(self._n)

    # -- comparison and hashing -----------------------------------------

    def __eq__(self, other) -> bool:
        other = CycNum._coerce(other)
        if other is None:
            return NotImplemented
        a, b = CycNum._align(self, other)
        return a._den == b._den and a._num == b._num

    def __ne__(self, other):
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def _normalized_trace(self) -> Fraction:
        weights = _trace_weights(self._n)
        return sum((w * c for w, c in zip(weights, self._num) if c), Fraction(0)) / self._den

    def __hash__(self) -> int:
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(Fraction(self._num[0], self._den))
            else:
                self._hash = hash((self._normalized_trace(), (self * self.conj())._normalized_trace()))
        return self._hash

    # -- presentation ----------------------------------------------------

    def __repr__(self) -> str:
        return f"CycNum({self._n}, {[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            if k == 0:
                terms.append(str(c))
            else:
                power = f"z{self._n}" if k == 1 else f"z{self._n}^{k}"
                terms.append(power if c == 1 else f"-{power}" if c == -1 else f"{c}*{power}")
        if not terms:
            return "0"
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> Dict:
        terms = [
            {"num": str(c.numerator), "den": str(c.denominator), "pow": k}
            for k, c in enumerate(self.coeffs) if c
        ]
        return {"n": self._n, "terms": terms}

    @classmethod
    def from_json(cls, data: Mapping) -> 'CycNum':
        """
        Decode the JSON scalar form {"n": n, "terms": [{"num": "..", "den": "..", "pow": k}]}.

        Bare integers and strings such as "3/2" are accepted as rationals.
        """
        if isinstance(data, (int, str)):
            return rational(Fraction(data))
        try:
            n = int(data["n"])
            coeffs: Dict[int, Fraction] = {}
            for term in data["terms"]:
                k = int(term["pow"])
                coeffs[k] = coeffs.get(k, Fraction(0)) + Fraction(int(term["num"]), int(term.get("den", 1)))
        except (KeyError, TypeError, ValueError) as e:
            raise InputError(f"Malformed cyclotomic scalar {data!r}: {e}")
        return cls(n, coeffs)


Scalar = Union[CycNum, int, Fraction]


@lru_cache(maxsize=4096)
def _rational_cached(value: Fraction) -> CycNum:
    return CycNum._make(1, (value.numerator,), value.denominator)


def rational(value) -> CycNum:
    """Embed a rational number as a CycNum of conductor 1."""
    return _rational_cached(Fraction(value))


def as_cycnum(value) -> CycNum:
    if isinstance(value, CycNum):
        return value
    if isinstance(value, (int, Fraction, str)):
        return rational(Fraction(value))
    if isinstance(value, Mapping):
        return CycNum.from_json(value)
    raise InputError(f"Cannot interpret {value!r} as a cyclotomic number")


@lru_cache(maxsize=None)
def zeta(n: int, k: int = 1) -> CycNum:
    """The root of unity zeta_n^k = exp(2 pi i k / n)."""
    return CycNum(n, {k: 1})


def common_conductor(values: Iterable[CycNum]) -> int:
    m = 1
    for v in values:
        m = lcm(m, v.conductor)
    _check_conductor(m)
    return m


def root_of_unity_exponent(x: CycNum) -> Optional[Tuple[int, int]]:
    """
    Identify x as a root of unity.

    Returns:
    tuple/None: (N, k) with x = zeta_N^k where N = lcm(conductor, 2), or None if x is not a root of unity.
    """
    big_n = lcm(x.conductor, 2)
    if x.norm() not in (1, -1):
        return None
    for k in range(big_n):
        if x == zeta(big_n, k):
            return big_n, k
    return None


def canonicalize(x: CycNum) -> CycNum:
    """
    Rewrite x over the smallest cyclotomic field containing it.

    The minimal conductor d is the least divisor of the current conductor n such that x is fixed by
    every automorphism zeta_n -> zeta_n^k with k = 1 mod d; coordinates over Q(zeta_d) are then found by
    an exact rational linear solve.
    """
    n = x.conductor
    if x.is_rational():
        return rational(x.to_fraction())
    for d in divisors(n):
        d = int(d)
        if d == n:
            return x
        if d % 4 == 2:
            continue
        fixing = [k for k in _units(n) if k % d == 1 % d]
        if all(x.galois(k) == x for k in fixing):
            deg_d = degree(d)
            basis = [zeta(d, j).embed(n).coeffs for j in range(deg_d)]
            system = Matrix([[Rational(basis[j][i].numerator, basis[j][i].denominator) for j in range(deg_d)]
                             for i in range(degree(n))])
            target = Matrix([Rational(c.numerator, c.denominator) for c in x.coeffs])
            solution, params = system.gauss_jordan_solve(target)
            coords = [Fraction(int(v.p), int(v.q)) for v in solution]
            return CycNum(d, coords)
    return x


def to_complex(x: CycNum, dps: Optional[int] = None) -> mpmath.mpc:
    """
    Numerical shadow of x under the embedding zeta_n -> exp(2 pi i / n).

    Parameters:
    x (CycNum): The value.
    dps (int): Decimal digits of working precision; defaults to CUSPLAB_NUMERIC_DPS.

    Returns:
    mpmath.mpc: The complex value.
    """
    with mpmath.workdps(dps or config.numeric_dps()):
        z = mpmath.exp(2j * mpmath.pi / x.conductor)
        total = mpmath.mpc(0)
        for k, c in enumerate(x.coeffs):
            if c:
                total += mpmath.mpf(c.numerator) / c.denominator * z**k
        return +total


def random_cycnum(rng, n: int, bound: int = 5, max_den: int = 4) -> CycNum:
    """A pseudo-random element of Q(zeta_n) drawn from a numpy Generator."""
    deg = degree(n)
    nums = rng.integers(-bound, bound + 1, size=deg)
    dens = rng.integers(1, max_den + 1, size=deg)
    return CycNum(n, [Fraction(int(a), int(b)) for a, b in zip(nums, dens)])

