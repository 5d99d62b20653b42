from fractions import Fraction
from functools import lru_cache
from itertools import combinations, combinations_with_replacement
from math import lcm
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from sympy import I, exp, pi
from sympy.polys.domains import QQ
from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.exceptions import DMNonInvertibleMatrixError

from cusplab.cyclotomic import CycNum, as_cycnum, common_conductor, degree, rational
from cusplab.exceptions import DimensionError, InputError, SingularMatrixError

_ZERO = rational(0)
_ONE = rational(1)


class RepMatrix:
    """
    Immutable square matrix over a cyclotomic field.

    All entries are held at one common conductor (the lcm of the entry conductors), so products and
    sums of matrices of the same conductor never re-embed entries.
    """

    __slots__ = ('_rows', '_dim', '_n', '_hash')

    def __init__(self, rows: Sequence[Sequence]):
        rows = [[as_cycnum(v) for v in row] for row in rows]
        dim = len(rows)
        if dim == 0 or any(len(row) != dim for row in rows):
            raise DimensionError(f"Matrix must be square and nonempty, got {dim} rows of lengths {[len(r) for r in rows]}")
        n = common_conductor(v for row in rows for v in row)
        self._set(tuple(tuple(v._lift(n) for v in row) for row in rows), n)

    def _set(self, rows: Tuple[Tuple[CycNum, ...], ...], n: int) -> None:
        self._rows = rows
        self._dim = len(rows)
        self._n = n
        self._hash = None

    @classmethod
    def _raw(cls, rows, n: int) -> 'RepMatrix':
        obj = cls.__new__(cls)
        obj._set(tuple(tuple(row) for row in rows), n)
        return obj

    @classmethod
    def identity(cls, dim: int) -> 'RepMatrix':
        return cls._raw([[_ONE if i == j else _ZERO for j in range(dim)] for i in range(dim)], 1)

    @classmethod
    def zeros(cls, dim: int) -> 'RepMatrix':
        return cls._raw([[_ZERO] * dim for _ in range(dim)], 1)

    @classmethod
    def diag(cls, values: Sequence) -> 'RepMatrix':
        values = [as_cycnum(v) for v in values]
        return cls([[values[i] if i == j else _ZERO for j in range(len(values))] for i in range(len(values))])

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence['RepMatrix']]) -> 'RepMatrix':
        """Assemble a square matrix from a square grid of equally sized square blocks."""
        size = blocks[0][0].dim
        rows = []
        for block_row in blocks:
            for i in range(size):
                row = []
                for block in block_row:
                    if block.dim != size:
                        raise DimensionError("Blocks must share one size")
                    row.extend(block._rows[i])
                rows.append(row)
        return cls(rows)

    # -- accessors -------------------------------------------------------

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def conductor(self) -> int:
        return self._n

    @property
    def rows(self) -> Tuple[Tuple[CycNum, ...], ...]:
        return self._rows

    def __getitem__(self, index: Tuple[int, int]) -> CycNum:
        i, j = index
        return self._rows[i][j]

    def column(self, j: int) -> List[CycNum]:
        return [row[j] for row in self._rows]

    def embed(self, m: int) -> 'RepMatrix':
        if m == self._n:
            return self
        return RepMatrix._raw([[v.embed(m) for v in row] for row in self._rows], m)

    def _lift(self, m: int) -> 'RepMatrix':
        if m == self._n:
            return self
        return RepMatrix._raw([[v._lift(m) for v in row] for row in self._rows], m)

    @staticmethod
    def _align(a: 'RepMatrix', b: 'RepMatrix') -> Tuple['RepMatrix', 'RepMatrix']:
        if a._n == b._n:
            return a, b
        m = lcm(a._n, b._n)
        return a._lift(m), b._lift(m)

    def key(self, n: Optional[int] = None) -> Tuple:
        """Hashable exact encoding of the entries at conductor n (default: own conductor)."""
        mat = self if n is None else self._lift(n)
        return tuple((v.numerators, v.denominator) for row in mat._rows for v in row)

    # -- arithmetic ------------------------------------------------------

    def __matmul__(self, other: 'RepMatrix') -> 'RepMatrix':
        if not isinstance(other, RepMatrix):
            return NotImplemented
        if self._dim != other._dim:
            raise DimensionError(f"Cannot multiply {self._dim}x{self._dim} by {other._dim}x{other._dim}")
        a, b = RepMatrix._align(self, other)
        d = a._dim
        cols = [[row[j] for row in b._rows] for j in range(d)]
        out = []
        for row in a._rows:
            nz = [(k, v) for k, v in enumerate(row) if v]
            new_row = []
            for col in cols:
                acc = None
                for k, v in nz:
                    w = col[k]
                    if w:
                        term = v * w
                        acc = term if acc is None else acc + term
                new_row.append(acc._lift(a._n) if acc is not None else _ZERO._lift(a._n))
            out.append(new_row)
        return RepMatrix._raw(out, a._n)

    def apply(self, vector: Sequence[CycNum]) -> List[CycNum]:
        out = []
        for row in self._rows:
            acc = _ZERO
            for v, w in zip(row, vector):
                if v and w:
                    acc = acc + v * w
            out.append(acc)
        return out

    def __add__(self, other: 'RepMatrix') -> 'RepMatrix':
        if not isinstance(other, RepMatrix):
            return NotImplemented
        a, b = RepMatrix._align(self, other)
        return RepMatrix._raw([[x + y for x, y in zip(r, s)] for r, s in zip(a._rows, b._rows)], a._n)

    def __neg__(self) -> 'RepMatrix':
        return RepMatrix._raw([[-x for x in row] for row in self._rows], self._n)

    def __sub__(self, other: 'RepMatrix') -> 'RepMatrix':
        if not isinstance(other, RepMatrix):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar) -> 'RepMatrix':
        if isinstance(scalar, RepMatrix):
            return NotImplemented
        s = as_cycnum(scalar)
        return RepMatrix([[x * s for x in row] for row in self._rows])

    __rmul__ = __mul__

    def __pow__(self, e: int) -> 'RepMatrix':
        if e < 0:
            return self.inverse() ** (-e)
        result = RepMatrix.identity(self._dim)
        base = self
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def transpose(self) -> 'RepMatrix':
        return RepMatrix._raw(list(zip(*self._rows)), self._n)

    def conj(self) -> 'RepMatrix':
        return RepMatrix._raw([[x.conj() for x in row] for row in self._rows], self._n)

    def galois(self, k: int) -> 'RepMatrix':
        return RepMatrix._raw([[x.galois(k) for x in row] for row in self._rows], self._n)

    def trace(self) -> CycNum:
        total = _ZERO
        for i in range(self._dim):
            total = total + self._rows[i][i]
        return total

    def det(self) -> CycNum:
        return det(self)

    def inverse(self) -> 'RepMatrix':
        return inverse(self)

    def charpoly(self) -> 'CharPoly':
        return charpoly(self)

    def is_identity(self) -> bool:
        return all((v == 1) if i == j else v.is_zero()
                   for i, row in enumerate(self._rows) for j, v in enumerate(row))

    def is_zero(self) -> bool:
        return all(v.is_zero() for row in self._rows for v in row)

    def is_scalar(self) -> bool:
        c = self._rows[0][0]
        return all((v == c) if i == j else v.is_zero()
                   for i, row in enumerate(self._rows) for j, v in enumerate(row))

    def is_symmetric(self) -> bool:
        return self == self.transpose()

    def is_antisymmetric(self) -> bool:
        return self == -self.transpose()

    # -- comparison ------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, RepMatrix):
            return NotImplemented
        if self._dim != other._dim:
            return False
        a, b = RepMatrix._align(self, other)
        return a._rows == b._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(hash(v) for row in self._rows for v in row))
        return self._hash

    def __repr__(self) -> str:
        return f"RepMatrix({[[str(v) for v in row] for row in self._rows]})"

    def __str__(self) -> str:
        cells = [[str(v) for v in row] for row in self._rows]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[" + "  ".join(c.rjust(width) for c in row) + "]" for row in cells)

    # -- JSON ------------------------------------------------------------

    def to_json(self) -> Dict:
        return {"dim": self._dim, "rows": [[v.to_json() for v in row] for row in self._rows]}

    @classmethod
    def from_json(cls, data: Mapping) -> 'RepMatrix':
        """Decode {"dim": d, "rows": [[scalar, ...], ...]}; scalars may be JSON objects, ints or "p/q" strings."""
        try:
            rows = data["rows"]
            dim = int(data.get("dim", len(rows)))
        except (KeyError, TypeError) as e:
            raise InputError(f"Malformed matrix JSON: {e}")
        mat = cls(rows)
        if mat.dim != dim:
            raise DimensionError(f"Matrix JSON declares dim {dim} but has {mat.dim} rows")
        return mat


# -- functorial constructions ---------------------------------------------

def wedge2_basis(dim: int) -> List[Tuple[int, int]]:
    """Ordered basis e_i ^ e_j, i < j, lexicographic; for dim 4 this is w1..w6 = 12, 13, 14, 23, 24, 34."""
    return list(combinations(range(dim), 2))


def wedge2_matrix(m: RepMatrix) -> RepMatrix:
    """
    Matrix of the exterior square of m.

    Parameters:
    m (RepMatrix): A d x d matrix.

    Returns:
    RepMatrix: The C(d,2) x C(d,2) matrix in the lexicographic basis of wedge2_basis(d).
    """
    basis = wedge2_basis(m.dim)
    r = m.rows
    rows = []
    for i, j in basis:
        row = []
        for k, l in basis:
            row.append(r[i][k] * r[j][l] - r[j][k] * r[i][l])
        rows.append(row)
    return RepMatrix._raw(rows, m.conductor)


def sym_power_basis(dim: int, k: int) -> List[Tuple[int, ...]]:
    return list(combinations_with_replacement(range(dim), k))


def sym_power_matrix(m: RepMatrix, k: int) -> RepMatrix:
    """Matrix of Sym^k m on the monomial basis e_{i1}...e_{ik}, i1 <= ... <= ik, lexicographic."""
    basis = sym_power_basis(m.dim, k)
    index = {mono: pos for pos, mono in enumerate(basis)}
    r = m.rows
    columns = []
    for mono in basis:
        expansion: Dict[Tuple[int, ...], CycNum] = {(): _ONE}
        for factor in mono:
            grown: Dict[Tuple[int, ...], CycNum] = {}
            for key, coeff in expansion.items():
                for i in range(m.dim):
                    entry = r[i][factor]
                    if entry:
                        new_key = tuple(sorted(key + (i,)))
                        term = coeff * entry
                        grown[new_key] = grown[new_key] + term if new_key in grown else term
            expansion = grown
        column = [_ZERO] * len(basis)
        for key, coeff in expansion.items():
            column[index[key]] = coeff
        columns.append(column)
    return RepMatrix(list(zip(*columns)))


def sym2_matrix(m: RepMatrix) -> RepMatrix:
    """Matrix of Sym^2 m on the basis e_i e_j, i <= j, lexicographic."""
    basis = sym_power_basis(m.dim, 2)
    r = m.rows
    rows = []
    for i, j in basis:
        row = []
        for k, l in basis:
            if i == j:
                row.append(r[i][k] * r[i][l])
            else:
                row.append(r[i][k] * r[j][l] + r[j][k] * r[i][l])
        rows.append(row)
    return RepMatrix(rows)


def tensor_matrix(m: RepMatrix, n: RepMatrix) -> RepMatrix:
    """Kronecker product; basis e_i (x) f_j ordered by i * dim(n) + j."""
    a, b = RepMatrix._align(m, n)
    rows = []
    for i in range(a.dim):
        for j in range(b.dim):
            rows.append([a.rows[i][k] * b.rows[j][l] for k in range(a.dim) for l in range(b.dim)])
    return RepMatrix._raw(rows, a.conductor)


def block_diag(*mats: RepMatrix) -> RepMatrix:
    total = sum(m.dim for m in mats)
    rows = []
    offset = 0
    for m in mats:
        for row in m.rows:
            rows.append([_ZERO] * offset + list(row) + [_ZERO] * (total - offset - m.dim))
        offset += m.dim
    return RepMatrix(rows)


def swap_matrix(dim: int) -> RepMatrix:
    """The flip v (x) w -> w (x) v on the tensor square of a dim-dimensional space."""
    size = dim * dim
    rows = [[_ZERO] * size for _ in range(size)]
    for a in range(dim):
        for b in range(dim):
            rows[b * dim + a][a * dim + b] = _ONE
    return RepMatrix._raw(rows, 1)


# -- elimination ------------------------------------------------------------
# -- elimination ------------------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic_domain(n: int) -> Domain:
    """
    sympy's number field Q(zeta_n) generated by exp(2 pi i / n).

    Its power basis is the CycNum storage basis, so coefficient vectors move across unchanged.
    Conductors with phi(n) = 1 give QQ.
    """
    if degree(n) == 1:
        return QQ
    return QQ.algebraic_field(exp(2 * pi * I / n))


def _to_element(x: CycNum, n: int, field: Domain):
    x = x.embed(n)
    if field.is_QQ:
        return QQ(x.numerators[0], x.denominator)
    coeffs = [QQ(c, x.denominator) for c in reversed(x.numerators)]
    while coeffs and not coeffs[0]:
        coeffs.pop(0)
    return field.new(coeffs)


def _from_element(a, n: int, field: Domain) -> CycNum:
    if field.is_QQ:
        return rational(Fraction(int(a.numerator), int(a.denominator)))
    return CycNum(n, [Fraction(int(c.numerator), int(c.denominator)) for c in reversed(a.to_list())])


def to_domain_matrix(rows: Sequence[Sequence]) -> Tuple[DomainMatrix, int]:
    """
    Dense DomainMatrix over cyclotomic_domain(n), n the common conductor of the entries.

    Parameters:
    rows (list): Rectangular matrix rows of scalars.

    Returns:
    tuple: (the DomainMatrix, n).
    """
    rows = [[as_cycnum(v) for v in row] for row in rows]
    n = common_conductor(v for row in rows for v in row)
    field = cyclotomic_domain(n)
    ncols = len(rows[0]) if rows else 0
    return DomainMatrix([[_to_element(v, n, field) for v in row] for row in rows], (len(rows), ncols), field), n


def equation_matrix(rows: Sequence[Mapping[int, CycNum]], ncols: int) -> Tuple[DomainMatrix, int]:
    """Dense DomainMatrix of equation rows given as {column: coefficient} dicts."""
    n = common_conductor(v for row in rows for v in row.values())
    field = cyclotomic_domain(n)
    dense = []
    for row in rows:
        line = [field.zero] * ncols
        for c, v in row.items():
            if v:
                line[c] = _to_element(v, n, field)
        dense.append(line)
    return DomainMatrix(dense, (len(rows), ncols), field), n


def from_domain_matrix(dm: DomainMatrix, n: int) -> List[List[CycNum]]:
    return [[_from_element(a, n, dm.domain) for a in row] for row in dm.to_list()]


def _nullspace(dm: DomainMatrix, n: int) -> List[List[CycNum]]:
    # scaled so the free column, the last nonzero entry, is 1
    basis = []
    for vec in from_domain_matrix(dm.nullspace(), n):
        last = next(v for v in reversed(vec) if v)
        basis.append([v / last for v in vec])
    return basis


def rref(rows: Sequence[Sequence]) -> Tuple[List[List[CycNum]], List[int]]:
    """
    Reduced row echelon form of a rectangular matrix.

    The reduced form is unique, so the bases read off it do not depend on pivot order.

    Parameters:
    rows (list): Matrix rows of scalars.

    Returns:
    tuple: (reduced nonzero rows, pivot columns).
    """
    if not rows:
        return [], []
    dm, n = to_domain_matrix(rows)
    reduced, pivots = dm.rref()
    return from_domain_matrix(reduced, n)[:len(pivots)], list(pivots)


def kernel(m) -> List[List[CycNum]]:
    """
    Exact basis of the right kernel {v : m v = 0}.

    Parameters:
    m (RepMatrix or list of rows): The matrix.

    Returns:
    list: Basis vectors, one per free column, each with a 1 at its free column.
    """
    rows = m.rows if isinstance(m, RepMatrix) else m
    dm, n = to_domain_matrix(rows)
    return _nullspace(dm, n)


def system_rank(rows: Sequence[Mapping[int, CycNum]], ncols: int) -> int:
    if not rows:
        return 0
    dm, _ = equation_matrix(rows, ncols)
    return dm.rank()


def det(m: RepMatrix) -> CycNum:
    dm, n = to_domain_matrix(m.rows)
    return _from_element(dm.det(), n, dm.domain)


def inverse(m: RepMatrix) -> RepMatrix:
    dm, n = to_domain_matrix(m.rows)
    try:
        inv = dm.inv()
    except (DMNonInvertibleMatrixError, ZeroDivisionError):
        raise SingularMatrixError("Matrix is singular")
    return RepMatrix(from_domain_matrix(inv, n))


def solve_left_pivots(basis_columns: Sequence[Sequence[CycNum]]) -> List[int]:
    """Row indices at which a full-column-rank matrix given by its columns has an invertible square minor."""
    _, pivots = rref(basis_columns)
    return pivots


def _commutation_equations(mats: Sequence[RepMatrix], d: int) -> Iterable[Dict[int, CycNum]]:
    for m in mats:
        r = m.rows
        for a in range(d):
            for b in range(d):
                row: Dict[int, CycNum] = {}
                for q in range(d):
                    if r[q][b]:
                        row[a * d + q] = row.get(a * d + q, _ZERO) + r[q][b]
                for p in range(d):
                    if r[a][p]:
                        row[p * d + b] = row.get(p * d + b, _ZERO) - r[a][p]
                yield row


def commutant(mats: Sequence[RepMatrix]) -> Tuple[int, List[RepMatrix]]:
    """
    Space of matrices X with X M = M X for every M in mats.

    The d^2 unknowns X[p][q] are indexed p * d + q; equation (a, b) of X M - M X = 0 has coefficient
    M[q][b] at (a, q) and -M[a][p] at (p, b). The equations are solved as one system.

    Parameters:
    mats (list): Nonempty list of d x d matrices.

    Returns:
    tuple: (dimension, basis of the commutant as RepMatrix).
    """
    if not mats:
        raise InputError("commutant needs at least one matrix")
    d = mats[0].dim
    if any(m.dim != d for m in mats):
        raise DimensionError("All matrices must share one dimension")
    dm, n = equation_matrix(list(_commutation_equations(mats, d)), d * d)
    basis = [RepMatrix([vec[i * d:(i + 1) * d] for i in range(d)]) for vec in _nullspace(dm, n)]
    return len(basis), basis


# -- characteristic polynomials -------------------------------------------

class CharPoly:
    """Monic polynomial over a cyclotomic field, coefficients highest degree first."""

    __slots__ = ('coeffs',)

    def __init__(self, coeffs: Sequence):
        coeffs = tuple(as_cycnum(c) for c in coeffs)
        if not coeffs or coeffs[0] != 1:
            raise InputError("CharPoly must be monic")
        self.coeffs = coeffs

    @classmethod
    def from_roots(cls, roots: Iterable) -> 'CharPoly':
        poly = cls([1])
        for r in roots:
            poly = poly * cls([1, -as_cycnum(r)])
        return poly

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other: 'CharPoly') -> 'CharPoly':
        out = [_ZERO] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] = out[i + j] + a * b
        return CharPoly(out)

    def __call__(self, x) -> CycNum:
        x = as_cycnum(x)
        acc = _ZERO
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if not isinstance(other, CharPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"CharPoly({self})"

    def __str__(self) -> str:
        terms = []
        for i, c in enumerate(self.coeffs):
            power = self.degree - i
            if not c:
                continue
            mono = "" if power == 0 else "x" if power == 1 else f"x^{power}"
            text = str(c)
            if c.is_rational():
                frac = c.to_fraction()
                sign = "-" if frac < 0 else "+"
                mag = abs(frac)
                body = mono if mag == 1 and mono else f"{mag}*{mono}" if mono else str(mag)
                terms.append((sign, body))
            else:
                terms.append(("+", f"({text})*{mono}" if mono else f"({text})"))
        if not terms:
            return "0"
        first_sign, first_body = terms[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> List:
        return [c.to_json() for c in self.coeffs]


def charpoly(m: RepMatrix) -> CharPoly:
    """Characteristic polynomial det(xI - m), from DomainMatrix.charpoly over the entries' cyclotomic field."""
    dm, n = to_domain_matrix(m.rows)
    return CharPoly([_from_element(c, n, dm.domain) for c in dm.charpoly()])


def random_invertible(rng, dim: int, bound: int = 3) -> RepMatrix:
    """A pseudo-random invertible integer matrix drawn from a numpy Generator."""
    while True:
        entries = rng.integers(-bound, bound + 1, size=(dim, dim))
        mat = RepMatrix([[int(v) for v in row] for row in entries])
        if det(mat):
            return mat
