import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from sympy import nextprime, primitive_root
from sympy.ntheory.residue_ntheory import sqrt_mod
from sympy.polys.domains import FF
from sympy.polys.matrices import DomainMatrix

from cusplab.cyclotomic import CycNum, as_cycnum, rational
from cusplab.exceptions import CharacterTableError, GroupMismatchError, NotACharacterError
from cusplab.groups import FiniteMatrixGroup, LinearCharacter

logging.basicConfig(level=logging.INFO)


class ClassFunction:
    """A function on a group that is constant on conjugacy classes, stored by class."""

    def __init__(self, group: FiniteMatrixGroup, values: Sequence, label: str = ''):
        self.group = group
        self.values = tuple(as_cycnum(v) for v in values)
        if len(self.values) != group.num_classes:
            raise GroupMismatchError(f"{len(self.values)} values given for {group.num_classes} classes of {group.name}")
        self.label = label

    @classmethod
    def from_linear(cls, chi: LinearCharacter) -> 'ClassFunction':
        return cls(chi.group, chi.class_values(), label=chi.label)

    @property
    def degree(self) -> CycNum:
        return self.values[0]

    def _check(self, other: 'ClassFunction') -> None:
        if other.group is not self.group:
            raise GroupMismatchError(f"Class functions on {self.group.name} and {other.group.name} cannot be combined")

    def __add__(self, other: 'ClassFunction') -> 'ClassFunction':
        self._check(other)
        return ClassFunction(self.group, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other: 'ClassFunction') -> 'ClassFunction':
        self._check(other)
        return ClassFunction(self.group, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self) -> 'ClassFunction':
        return ClassFunction(self.group, [-a for a in self.values])

    def __mul__(self, other) -> 'ClassFunction':
        if isinstance(other, ClassFunction):
            self._check(other)
            return ClassFunction(self.group, [a * b for a, b in zip(self.values, other.values)])
        s = as_cycnum(other)
        return ClassFunction(self.group, [a * s for a in self.values])

    __rmul__ = __mul__

    def conj(self) -> 'ClassFunction':
        return ClassFunction(self.group, [a.conj() for a in self.values])

    def power(self, k: int) -> 'ClassFunction':
        """The class function g -> f(g^k)."""
        pm = self.group.power_map(k)
        return ClassFunction(self.group, [self.values[c] for c in pm])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ClassFunction):
            return NotImplemented
        return other.group is self.group and self.values == other.values

    def __hash__(self) -> int:
        return hash((id(self.group), self.values))

    def __repr__(self) -> str:
        return f"ClassFunction({self.label or '?'}: {[str(v) for v in self.values]})"

    def norm(self) -> CycNum:
        return inner_product(self, self)

    def is_irreducible_character(self) -> bool:
        return self.norm() == 1 and self.degree.is_rational() and self.degree.to_fraction() > 0

    def to_json(self) -> Dict:
        return {
            "label": self.label,
            "values": {str(r): v.to_json() for r, v in zip(self.group.class_reps, self.values)},
        }


def inner_product(f: ClassFunction, g: ClassFunction) -> CycNum:
    """
    The normalized Hermitian inner product of two class functions.

    Parameters:
    f (ClassFunction): First argument (linear).
    g (ClassFunction): Second argument (conjugated).

    Returns:
    CycNum: (1/|G|) sum over g of f(g) conj(g(g)).

    Raises:
    GroupMismatchError: If the class functions live on different groups.
    """
    f._check(g)
    total = rational(0)
    for size, a, b in zip(f.group.class_sizes, f.values, g.values):
        if a and b:
            total = total + a * b.conj() * size
    return total * Fraction(1, f.group.order)


def trivial(group: FiniteMatrixGroup) -> ClassFunction:
    return ClassFunction(group, [1] * group.num_classes, label="trivial")


def regular_character(group: FiniteMatrixGroup) -> ClassFunction:
    return ClassFunction(group, [group.order] + [0] * (group.num_classes - 1), label="regular")


def wedge2_character(f: ClassFunction) -> ClassFunction:
    """chi(g)^2 - chi(g^2), halved."""
    return (f * f - f.power(2)) * Fraction(1, 2)


def sym2_character(f: ClassFunction) -> ClassFunction:
    return (f * f + f.power(2)) * Fraction(1, 2)


def ext_power_character(f: ClassFunction, k: int) -> ClassFunction:
    """Character of the k-th exterior power by Newton's identities e_k = (1/k) sum (-1)^(i-1) e_(k-i) p_i."""
    e = [trivial(f.group)]
    for m in range(1, k + 1):
        acc = None
        for i in range(1, m + 1):
            term = e[m - i] * f.power(i) * (1 if i % 2 else -1)
            acc = term if acc is None else acc + term
        e.append(acc * Fraction(1, m))
    return e[k]


def sym_power_character(f: ClassFunction, k: int) -> ClassFunction:
    """Character of Sym^k by h_k = (1/k) sum h_(k-i) p_i."""
    h = [trivial(f.group)]
    for m in range(1, k + 1):
        acc = None
        for i in range(1, m + 1):
            term = h[m - i] * f.power(i)
            acc = term if acc is None else acc + term
        h.append(acc * Fraction(1, m))
    return h[k]


def frobenius_schur_indicator(f: ClassFunction) -> CycNum:
    """(1/|G|) sum f(g^2); for an irreducible character 1, 0 or -1 (real, complex, quaternionic)."""
    squares = f.power(2)
    total = rational(0)
    for size, v in zip(f.group.class_sizes, squares.values):
        total = total + v * size
    return total * Fraction(1, f.group.order)


@dataclass
class CharacterTable:
    group: FiniteMatrixGroup
    characters: List[ClassFunction]
    prime: int = 0
    notes: Dict[str, object] = field(default_factory=dict)

    @property
    def degrees(self) -> List[int]:
        return [int(chi.degree.to_fraction()) for chi in self.characters]

    def __len__(self) -> int:
        return len(self.characters)

    def __getitem__(self, i: int) -> ClassFunction:
        return self.characters[i]

    def to_frame(self) -> pd.DataFrame:
        """Irreducible characters as rows, one column per class representative."""
        g = self.group
        columns = [f"{r} (|C|={s}, o={int(g.element_orders[r])})" for r, s in zip(g.class_reps, g.class_sizes)]
        data = [[str(v) for v in chi.values] for chi in self.characters]
        return pd.DataFrame(data, columns=columns, index=[chi.label for chi in self.characters])

    def to_json(self) -> List[Dict]:
        return [
            {"index": i, "degree": d, "values": chi.to_json()["values"]}
            for i, (chi, d) in enumerate(zip(self.characters, self.degrees))
        ]


def _class_coefficients(group: FiniteMatrixGroup) -> np.ndarray:
    # c[j, l, k] = #{x in C_j : x^-1 rep_k in C_l}
    r = group.num_classes
    c = np.zeros((r, r, r), dtype=np.int64)
    cls = group.class_of
    for k, rep in enumerate(group.class_reps):
        ys = group.table[group.inv, rep]
        np.add.at(c, (cls, cls[ys], k), 1)
    return c


def dixon_prime(order: int, exponent: int) -> int:
    """Smallest prime p > 2 sqrt(|G|) with p = 1 mod exponent."""
    p = 2 * isqrt(order)
    while True:
        p = int(nextprime(p))
        if (p - 1) % exponent == 0:
            return p


def _to_int(v, p: int) -> int:
    return int(v) % p


def _eigenspaces(a: DomainMatrix, p: int) -> List[DomainMatrix]:
    """Row bases of the left eigenspaces of a, over GF(p), for every eigenvalue in GF(p)."""
    fp = a.domain
    at = a.to_dense().transpose()
    coeffs = [_to_int(c, p) for c in at.charpoly()]
    roots = []
    for z in range(p):
        acc = 0
        for c in coeffs:
            acc = (acc * z + c) % p
        if acc == 0:
            roots.append(z)
    spaces = []
    size = a.shape[0]
    for z in roots:
        shifted = at - DomainMatrix.diag([fp(z)] * size, fp, (size, size)).to_dense()
        basis, _ = shifted.nullspace().to_dense().rref()
        spaces.append(basis.to_dense())
    if sum(s.shape[0] for s in spaces) != size:
        raise CharacterTableError("Class matrix is not diagonalizable over the chosen prime field")
    return spaces


def _refine(spaces: List[DomainMatrix], n_mat: DomainMatrix, p: int) -> List[DomainMatrix]:
    # nullspace and rref may hand back sparse matrices; matmul needs matching formats
    refined = []
    n_mat = n_mat.to_dense()
    for s in spaces:
        s = s.to_dense()
        if s.shape[0] <= 1:
            refined.append(s)
            continue
        _, pivots = s.rref()
        restricted = s.matmul(n_mat.extract(list(range(s.shape[1])), list(pivots)).to_dense())
        for sub in _eigenspaces(restricted, p):
            refined.append(sub.to_dense().matmul(s))
    return refined


def character_table(group: FiniteMatrixGroup) -> CharacterTable:
    """
    Complete character table by the Dixon-Schneider method.

    Common eigenvectors of the class multiplication matrices are found over GF(p) for a prime
    p = 1 mod exp(G), p > 2 sqrt(|G|); each gives the central character w_k = |C_k| chi(g_k) / chi(1), the
    degree follows from chi(1)^2 = |G| / sum w_k w_k* / |C_k|, and values are lifted to Q(zeta_e) through
    the multiplicities of the eigenvalues zeta_e^t. Both orthogonality relations are verified exactly.

    Parameters:
    group (FiniteMatrixGroup): The enumerated group.

    Returns:
    CharacterTable: Irreducible characters, trivial first, then by degree.

    Raises:
    CharacterTableError: If the eigenspaces cannot be split or the lifted table fails orthogonality.
    """
    if 'character_table' in group.cache:
        return group.cache['character_table']
    n, r, e = group.order, group.num_classes, group.exponent
    p = dixon_prime(n, e)
    fp = FF(p)
    logging.info(f"Character table of {group.name}: order {n}, {r} classes, exponent {e}, prime {p}")
    coeffs = _class_coefficients(group)
    spaces = [DomainMatrix.eye(r, fp).to_dense()]
    for j in range(1, r):
        if len(spaces) == r:
            break
        n_mat = DomainMatrix.from_list(coeffs[j].T.tolist(), fp)
        spaces = _refine(spaces, n_mat, p)
    if len(spaces) != r:
        raise CharacterTableError(f"Found {len(spaces)} common eigenspaces for {r} classes of {group.name}")

    sizes = group.class_sizes
    inv_class = [int(group.class_of[group.inv[rep]]) for rep in group.class_reps]
    z = pow(int(primitive_root(p)), (p - 1) // e, p)
    # power classes: pow_classes[l][k] = class of rep_k ** l
    reps = np.array(group.class_reps, dtype=np.int64)
    pow_classes = []
    cur = np.zeros_like(reps)
    for _ in range(e):
        pow_classes.append(group.class_of[cur])
        cur = group.table[cur, reps]
    e_inv = pow(e, -1, p)

    characters = []
    residues = []
    for space in spaces:
        row = [_to_int(v, p) for v in space.to_list()[0]]
        scale = pow(row[0], -1, p)
        w = [(v * scale) % p for v in row]
        dot = sum(w[k] * w[inv_class[k]] * pow(sizes[k], -1, p) for k in range(r)) % p
        deg_sq = (n * pow(dot, -1, p)) % p
        roots = sqrt_mod(deg_sq, p, all_roots=True) or []
        candidates = [x for x in roots if 0 < x and x * x <= n]
        if not candidates:
            raise CharacterTableError(f"No admissible degree square root of {deg_sq} mod {p}")
        deg = min(candidates)
        theta = [(deg * w[k] * pow(sizes[k], -1, p)) % p for k in range(r)]
        values = []
        for k in range(r):
            mults = {}
            for t in range(e):
                acc = 0
                for l in range(e):
                    acc += theta[int(pow_classes[l][k])] * pow(z, (-t * l) % e, p)
                m_t = (acc * e_inv) % p
                if m_t:
                    if m_t > deg:
                        raise CharacterTableError(f"Eigenvalue multiplicity {m_t} exceeds degree {deg}")
                    mults[t] = m_t
            values.append(CycNum(e, mults) if e > 1 else rational(mults.get(0, 0)))
        characters.append(ClassFunction(group, values))
        residues.append(tuple(theta))

    order_idx = sorted(range(r), key=lambda i: (any(v != 1 for v in characters[i].values), int(characters[i].degree.to_fraction()), residues[i]))
    characters = [characters[i] for i in order_idx]
    for i, chi in enumerate(characters):
        chi.label = f"X.{i}"
    table = CharacterTable(group, characters, prime=p)
    _verify_table(table)
    group.cache['character_table'] = table
    return table


def _verify_table(table: CharacterTable) -> None:
    group = table.group
    chars = table.characters
    r = group.num_classes
    if sum(d * d for d in table.degrees) != group.order:
        raise CharacterTableError(f"Degrees {table.degrees} do not satisfy sum d^2 = {group.order}")
    conj_rows = [chi.conj() for chi in chars]
    for i in range(r):
        for j in range(i, r):
            total = rational(0)
            for size, a, b in zip(group.class_sizes, chars[i].values, conj_rows[j].values):
                total = total + a * b * size
            if total != (group.order if i == j else 0):
                raise CharacterTableError(f"Row orthogonality fails for characters {i}, {j}")
    for k in range(r):
        for l in range(k, r):
            total = rational(0)
            for chi, bar in zip(chars, conj_rows):
                total = total + chi.values[k] * bar.values[l]
            expected = Fraction(group.order, group.class_sizes[k]) if k == l else 0
            if total != expected:
                raise CharacterTableError(f"Column orthogonality fails for classes {k}, {l}")


def decompose(f: ClassFunction, table: Optional[CharacterTable] = None) -> List[Tuple[int, int, int]]:
    """
    Decompose a character into irreducible constituents.

    Parameters:
    f (ClassFunction): A genuine character of its group.
    table (CharacterTable): Optional precomputed table; computed on demand otherwise.

    Returns:
    list: (irreducible index, multiplicity, degree) for every constituent with positive multiplicity.

    Raises:
    NotACharacterError: If some multiplicity is not a non-negative integer.
    """
    table = table or character_table(f.group)
    out = []
    for i, chi in enumerate(table.characters):
        m = inner_product(f, chi)
        if not m.is_rational() or m.to_fraction().denominator != 1 or m.to_fraction() < 0:
            raise NotACharacterError(f"<{f.label or 'f'}, {chi.label}> = {m} is not a non-negative integer")
        mult = int(m.to_fraction())
        if mult:
            out.append((i, mult, table.degrees[i]))
    return out


def constituent_degrees(f: ClassFunction) -> List[int]:
    """Degrees of the irreducible constituents, repeated by multiplicity, ascending."""
    return sorted(d for _, m, d in decompose(f) for _ in range(m))


def table_frame(group: FiniteMatrixGroup) -> pd.DataFrame:
    return character_table(group).to_frame()
