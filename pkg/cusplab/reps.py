from dataclasses import dataclass
from functools import cached_property
from math import lcm
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from cusplab.chars import ClassFunction, character_table, inner_product
from cusplab.cyclotomic import CycNum, rational
from cusplab.exactla import (
    RepMatrix, block_diag, commutant, rref, solve_left_pivots, swap_matrix, sym2_matrix,
    sym_power_matrix, system_rank, tensor_matrix, wedge2_matrix,
)
from cusplab.exceptions import (
    ConsistencyError, DimensionError, GroupMismatchError, InputError, NotAHomomorphismError, SubgroupIndexError,
)
from cusplab.groups import FiniteMatrixGroup, LinearCharacter, linear_character_from_generators, locate_subgroup

_ZERO = rational(0)
_ONE = rational(1)

SYMMETRIC = 'symmetric'
ALTERNATING = 'alternating'


class Representation:
    """
    A homomorphism from an enumerated group into invertible matrices.

    Only generator images are stored; the image of any element is built along its breadth-first word and
    memoized. Construction spot-checks the homomorphism property on seeded random pairs.
    """

    def __init__(self, group: FiniteMatrixGroup, generator_images: Sequence, name: str = '', check: bool = True,
                 seed: int = 0, pairs: int = 50):
        images = [m if isinstance(m, RepMatrix) else RepMatrix(m) for m in generator_images]
        if len(images) != len(group.generators):
            raise InputError(f"{len(images)} images given for {len(group.generators)} generators of {group.name}")
        dim = images[0].dim
        if any(m.dim != dim for m in images):
            raise DimensionError("Generator images must share one dimension")
        n = 1
        for m in images:
            n = lcm(n, m.conductor)
        self.group = group
        self.generator_images = [m.embed(n) for m in images]
        self.dim = dim
        self.conductor = n
        self.name = name
        self._images: Dict[int, RepMatrix] = {0: RepMatrix.identity(dim).embed(n)}
        if check:
            check_homomorphism(self, pairs=pairs, seed=seed)

    def __repr__(self) -> str:
        return f"Representation({self.name or '?'}, dim={self.dim}, group={self.group.name})"

    def image(self, i: int) -> RepMatrix:
        """Matrix of the element with index i."""
        i = int(i)
        if i in self._images:
            return self._images[i]
        chain = []
        while i not in self._images:
            chain.append(i)
            i = int(self.group.parent[i])
        mat = self._images[i]
        for j in reversed(chain):
            mat = mat @ self.generator_images[int(self.group.via[j])]
            self._images[j] = mat
        return mat

    def images(self) -> List[RepMatrix]:
        return [self.image(i) for i in range(self.group.order)]

    @cached_property
    def character(self) -> ClassFunction:
        return ClassFunction(self.group, [self.image(r).trace() for r in self.group.class_reps],
                             label=f"chi({self.name})")

    @cached_property
    def det_character(self) -> LinearCharacter:
        """det o sigma as a linear character."""
        return linear_character_from_generators(self.group, [m.det() for m in self.generator_images],
                                                label=f"det({self.name})")

    def to_json(self) -> Dict:
        return {"group": self.group.name, "dim": self.dim, "generators": [m.to_json() for m in self.generator_images]}

    @classmethod
    def from_json(cls, data: Mapping, group: FiniteMatrixGroup, name: str = '') -> 'Representation':
        """Decode {"group": ref, "generators": [matrix, ...]} against an already enumerated group."""
        try:
            mats = [RepMatrix.from_json(m) for m in data["generators"]]
        except (KeyError, TypeError) as e:
            raise InputError(f"Malformed representation JSON: {e}")
        return cls(group, mats, name=name or str(data.get("name", "")))


def check_homomorphism(rep: Representation, pairs: int = 50, seed: int = 0) -> None:
    """
    Verify generator consistency and image(gh) = image(g) image(h) on seeded random pairs.

    Raises:
    NotAHomomorphismError: On the first violation.
    """
    group = rep.group
    for s, pos in enumerate(group.gen_positions):
        if rep.image(pos) != rep.generator_images[s]:
            raise NotAHomomorphismError(f"Image of generator {s} of {group.name} is inconsistent with the group relations")
    rng = np.random.default_rng(seed)
    for g, h in rng.integers(0, group.order, size=(pairs, 2)):
        if rep.image(group.table[g, h]) != rep.image(g) @ rep.image(h):
            raise NotAHomomorphismError(f"Images of {group.name} elements {g}, {h} are not multiplicative")


def inclusion(group: FiniteMatrixGroup, name: str = '') -> Representation:
    """The defining representation of a matrix group."""
    return Representation(group, group.generators, name=name or group.name, check=False)


def _derived(rep: Representation, images: Sequence[RepMatrix], name: str) -> Representation:
    return Representation(rep.group, images, name=name, check=False)


def dual(rep: Representation) -> Representation:
    """Contragredient: inverse transpose on generators."""
    return _derived(rep, [m.inverse().transpose() for m in rep.generator_images], f"dual({rep.name})")


def twist(rep: Representation, chi: LinearCharacter) -> Representation:
    """chi (x) rep: every image scaled by the value of chi."""
    if chi.group is not rep.group:
        raise GroupMismatchError("Character and representation live on different groups")
    return _derived(rep, [m * chi.value(pos) for m, pos in zip(rep.generator_images, rep.group.gen_positions)],
                    f"{chi.label}*{rep.name}")


def tensor(a: Representation, b: Representation) -> Representation:
    if a.group is not b.group:
        raise GroupMismatchError("Tensor factors live on different groups")
    return _derived(a, [tensor_matrix(x, y) for x, y in zip(a.generator_images, b.generator_images)],
                    f"{a.name}(x){b.name}")


def direct_sum(a: Representation, b: Representation) -> Representation:
    if a.group is not b.group:
        raise GroupMismatchError("Summands live on different groups")
    return _derived(a, [block_diag(x, y) for x, y in zip(a.generator_images, b.generator_images)],
                    f"{a.name}+{b.name}")


def wedge2(rep: Representation) -> Representation:
    return _derived(rep, [wedge2_matrix(m) for m in rep.generator_images], f"wedge2({rep.name})")


def sym2(rep: Representation) -> Representation:
    return _derived(rep, [sym2_matrix(m) for m in rep.generator_images], f"sym2({rep.name})")


def sym_power(rep: Representation, k: int) -> Representation:
    return _derived(rep, [sym_power_matrix(m, k) for m in rep.generator_images], f"sym{k}({rep.name})")


def galois_conjugate(rep: Representation, k: int) -> Representation:
    """Apply zeta -> zeta^k to every matrix entry."""
    return _derived(rep, [m.galois(k) for m in rep.generator_images], f"{rep.name}^[{k}]")


def restrict(rep: Representation, sub: FiniteMatrixGroup) -> Representation:
    """
    Restriction to a subgroup.

    Parameters:
    rep (Representation): Representation of G.
    sub (FiniteMatrixGroup): A subgroup of G, either built from G or located in G element by element.

    Returns:
    Representation: The representation of sub with the same matrices.
    """
    emb = locate_subgroup(rep.group, sub)
    images = [rep.image(emb[pos]) for pos in sub.gen_positions]
    return Representation(sub, images, name=f"{rep.name}|{sub.name}", check=False)


def _index2_setup(sub: FiniteMatrixGroup, group: FiniteMatrixGroup) -> Tuple[np.ndarray, np.ndarray, int]:
    emb = locate_subgroup(group, sub)
    if 2 * sub.order != group.order:
        raise SubgroupIndexError(f"{sub.name} has index {group.order / sub.order:g} in {group.name}, expected 2")
    position = np.full(group.order, -1, dtype=np.int64)
    position[emb] = np.arange(sub.order)
    g0 = int(np.flatnonzero(position < 0)[0])
    return position, emb, g0


def _coset_step(group: FiniteMatrixGroup, position: np.ndarray, g0: int, g: int, i: int) -> Tuple[int, int]:
    """For g t_i = t_j h with transversal (e, g0), return (j, index of h in the subgroup)."""
    t_i = 0 if i == 0 else g0
    x = int(group.table[g, t_i])
    if position[x] >= 0:
        return 0, int(position[x])
    return 1, int(position[group.table[group.inv[g0], x]])


def induce_index2(tau: Representation, group: FiniteMatrixGroup) -> Representation:
    """
    Induce a representation from an index-2 subgroup.

    The coset transversal is (e, g0) with g0 the first element of group outside the subgroup; the block
    in position (j, i) of the image of g is tau(h) when g t_i = t_j h, and zero otherwise.

    Raises:
    SubgroupIndexError: If the subgroup does not have index 2.
    """
    position, _, g0 = _index2_setup(tau.group, group)
    zero = RepMatrix.zeros(tau.dim)
    images = []
    for g in group.gen_positions:
        blocks = [[zero, zero], [zero, zero]]
        for i in range(2):
            j, h = _coset_step(group, position, g0, g, i)
            blocks[j][i] = tau.image(h)
        images.append(RepMatrix.from_blocks(blocks))
    return Representation(group, images, name=f"Ind({tau.name})")


def asai_construct(tau: Representation, group: FiniteMatrixGroup, sign: int = 1) -> Representation:
    """
    Twisted tensor (tensor induction) of a 2-dimensional representation of an index-2 subgroup H.

    With transversal (e, g0) and g t_i = t_pi(i) h_i, the image of g sends v_0 (x) v_1 to the tensor whose
    slot pi(i) holds tau(h_i) v_i; on the nontrivial coset this is the swap composed with
    tau(h_0) (x) tau(h_1). Restricted to H it is tau (x) tau(g0^-1 . g0). With sign = -1 the elements outside
    H pick up an extra factor -1, which is the twist by the sign character of G/H.

    Raises:
    DimensionError: If tau is not 2-dimensional.
    SubgroupIndexError: If H does not have index 2.
    """
    if tau.dim != 2:
        raise DimensionError(f"Twisted tensor construction needs a 2-dimensional input, got {tau.dim}")
    if sign not in (1, -1):
        raise InputError("sign must be +1 or -1")
    position, _, g0 = _index2_setup(tau.group, group)
    swap = swap_matrix(tau.dim)
    images = []
    for g in group.gen_positions:
        (j0, h0), (j1, h1) = (_coset_step(group, position, g0, g, i) for i in range(2))
        mat = tensor_matrix(tau.image(h0), tau.image(h1))
        if j0 == 1:
            mat = swap @ mat
        if position[g] < 0 and sign == -1:
            mat = -mat
        images.append(mat)
    label = "As" if sign == 1 else "As-"
    return Representation(group, images, name=f"{label}({tau.name})")


@dataclass
class BilinearForm:
    """
    An invariant bilinear form C(v, w) = v^T gram w.

    The form satisfies C(sigma(g) v, sigma(g) w) = character(g)^-1 C(v, w); the similitude character
    (the multiplier of the form) is therefore character^-1.
    """
    gram: RepMatrix
    character: LinearCharacter
    symmetry: str

    @property
    def similitude(self) -> LinearCharacter:
        return self.character.inverse()

    def is_nondegenerate(self) -> bool:
        return bool(self.gram.det())

    def holds_for(self, rep: Representation) -> bool:
        for m, pos in zip(rep.generator_images, rep.group.gen_positions):
            if m.transpose() @ self.gram @ m != self.gram * self.similitude.value(pos):
                return False
        if self.symmetry == SYMMETRIC:
            return self.gram.is_symmetric()
        return self.gram.is_antisymmetric()

    def to_json(self) -> Dict:
        return {"symmetry": self.symmetry, "gram": self.gram.to_json(),
                "similitude": self.similitude.to_json()}


def _form_space_dim(rep: Representation, chi: LinearCharacter, symmetry: str) -> int:
    # gram C with sigma(s)^T C sigma(s) = chi(s)^-1 C on generators and C^T = +-C
    d = rep.dim
    equations = []
    sgn = 1 if symmetry == SYMMETRIC else -1
    for p in range(d):
        for q in range(p, d):
            if p == q and sgn == 1:
                continue
            row = {p * d + q: _ONE}
            row[q * d + p] = row.get(q * d + p, _ZERO) - sgn
            equations.append(row)
    for m, pos in zip(rep.generator_images, rep.group.gen_positions):
        mult = chi.value(pos).inverse()
        r = m.rows
        for a in range(d):
            for b in range(d):
                row: Dict[int, CycNum] = {}
                for p in range(d):
                    if not r[p][a]:
                        continue
                    for q in range(d):
                        if r[q][b]:
                            row[p * d + q] = row.get(p * d + q, _ZERO) + r[p][a] * r[q][b]
                row[a * d + b] = row.get(a * d + b, _ZERO) - mult
                equations.append(row)
    return d * d - system_rank(equations, d * d)


def _reynolds(rep: Representation, chi: LinearCharacter, seed_form: RepMatrix) -> RepMatrix:
    total = None
    for g in range(rep.group.order):
        m = rep.image(g)
        term = (m.transpose() @ seed_form @ m) * chi.value(g)
        total = term if total is None else total + term
    return total


def invariant_form(rep: Representation, chi: LinearCharacter, symmetry: str, seed: int = 0,
                   tries: int = 3) -> Optional[BilinearForm]:
    """
    Find a nonzero bilinear form C with C(sigma(g)v, sigma(g)w) = chi(g)^-1 C(v, w).

    Existence is decided first by solving the generator equations exactly; when the space of such
    forms is nonzero, the form is produced by the Reynolds average sum_g chi(g) sigma(g)^T B0 sigma(g) over
    seeded random integer seed forms B0 (symmetrized or antisymmetrized first), falling back to the
    elementary seeds E_pq +- E_qp.

    Parameters:
    rep (Representation): The representation.
    chi (LinearCharacter): Character on the same group.
    symmetry (str): 'symmetric' or 'alternating'.
    seed (int): Seed of the random seed forms.
    tries (int): Number of random seed forms before the elementary sweep.

    Returns:
    BilinearForm/None: The form, or None when no such form exists.

    Raises:
    ConsistencyError: If rep is irreducible and the form found is degenerate.
    """
    if symmetry not in (SYMMETRIC, ALTERNATING):
        raise InputError(f"Unknown symmetry {symmetry!r}")
    if chi.group is not rep.group:
        raise GroupMismatchError("Character and representation live on different groups")
    if _form_space_dim(rep, chi, symmetry) == 0:
        return None
    d = rep.dim
    sgn = 1 if symmetry == SYMMETRIC else -1
    rng = np.random.default_rng(seed)
    seeds = []
    for _ in range(tries):
        raw = RepMatrix([[int(v) for v in row] for row in rng.integers(-3, 4, size=(d, d))])
        seeds.append(raw + raw.transpose() * sgn)
    for p in range(d):
        for q in range(p if sgn == 1 else p + 1, d):
            rows = [[_ZERO] * d for _ in range(d)]
            rows[p][q] = _ONE
            rows[q][p] = rows[q][p] + sgn
            seeds.append(RepMatrix(rows))
    for seed_form in seeds:
        if seed_form.is_zero():
            continue
        gram = _reynolds(rep, chi, seed_form)
        if not gram.is_zero():
            form = BilinearForm(gram, chi, symmetry)
            if not form.holds_for(rep):
                raise ConsistencyError("Averaged form fails the similitude relation")
            if rep.character.norm() == 1 and not form.is_nondegenerate():
                raise ConsistencyError(f"Invariant {symmetry} form of irreducible {rep.name} is degenerate")
            return form
    raise ConsistencyError(f"No nonzero averaged {symmetry} form although the form space is nonzero")


def isotypic_constituent(rep: Representation, sub: FiniteMatrixGroup, psi: ClassFunction) -> Representation:
    """
    The psi-isotypic part of rep restricted to sub, as a representation of sub.

    The projector (psi(1)/|H|) sum_h conj(psi(h)) sigma(h) is applied; its column space is spanned by the
    pivot columns, and the action on that span is read off an invertible square minor.
    """
    if psi.group is not sub:
        raise GroupMismatchError("psi must be a class function on the subgroup")
    res = restrict(rep, sub)
    d = rep.dim
    proj = None
    for h in range(sub.order):
        value = psi.values[int(sub.class_of[h])]
        if value:
            term = res.image(h) * value.conj()
            proj = term if proj is None else proj + term
    proj = proj * (psi.degree * rational(1) / sub.order)
    _, col_pivots = rref(proj.rows)
    basis_cols = [proj.column(c) for c in col_pivots]
    row_pivots = solve_left_pivots(basis_cols)
    minor = RepMatrix([[basis_cols[c][r] for c in range(len(basis_cols))] for r in row_pivots])
    minor_inv = minor.inverse()
    images = []
    for pos in sub.gen_positions:
        m = res.image(pos)
        moved = [m.apply(col) for col in basis_cols]
        block = RepMatrix([[moved[c][r] for c in range(len(moved))] for r in row_pivots])
        images.append(minor_inv @ block)
    return Representation(sub, images, name=f"{rep.name}|{sub.name}[{psi.label}]")


def clifford_constituent(rep: Representation, sub: FiniteMatrixGroup) -> Representation:
    """
    The isotypic part of rep restricted to sub for the first table character that occurs.

    This is irreducible exactly when that character occurs with multiplicity one, as it does for an
    irreducible rep restricted to the kernel of a quadratic self-twist.
    """
    res_char = restrict(rep, sub).character
    for psi in character_table(sub).characters:
        if inner_product(res_char, psi) != 0:
            return isotypic_constituent(rep, sub, psi)
    raise ConsistencyError(f"Restriction of {rep.name} to {sub.name} has no constituent")


def induce_witness(rep: Representation, chi: LinearCharacter) -> Tuple[Representation, Representation]:
    """
    For a quadratic self-twist chi, exhibit rep as induced from ker(chi).

    Returns:
    tuple: (constituent tau on ker(chi), induce_index2(tau)), with matching characters.

    Raises:
    ConsistencyError: If the induced character differs from the character of rep.
    """
    sub = chi.kernel()
    tau = clifford_constituent(rep, sub)
    induced = induce_index2(tau, rep.group)
    if induced.character != rep.character:
        raise ConsistencyError(f"Induction from {sub.name} does not reproduce {rep.name}")
    return tau, induced


def schur_commutant_dim(rep: Representation) -> int:
    return commutant(rep.generator_images)[0]
