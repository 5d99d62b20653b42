import logging
from functools import cached_property
from math import gcd, lcm
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.domains import ZZ

from cusplab import config
from cusplab.cyclotomic import CycNum, root_of_unity_exponent, zeta
from cusplab.exactla import RepMatrix
from cusplab.exceptions import (
    CheckFailure, DimensionError, GroupMismatchError, GroupOrderExceededError, InputError, NotASubgroupError,
    SingularGeneratorError,
)

logging.basicConfig(level=logging.INFO)


class FiniteMatrixGroup:
    """
    A finite group of exact matrices, fully enumerated.

    Elements are listed in breadth-first order from the identity, multiplying on the right by the
    generators in index order. The multiplication table is a numpy array with table[i, j] the index of
    elements[i] @ elements[j]; every element also records the BFS parent and the generator used to reach
    it, which spells a word for it in the generators.
    """

    def __init__(self, name: str, generators: Sequence[RepMatrix], elements: Sequence[RepMatrix], table: np.ndarray,
                 parent: np.ndarray, via: np.ndarray, gen_positions: Sequence[int],
                 parent_group: Optional['FiniteMatrixGroup'] = None, embedding: Optional[np.ndarray] = None):
        self.name = name
        self.generators = list(generators)
        self.elements = list(elements)
        self.table = table
        self.parent = parent
        self.via = via
        self.gen_positions = list(gen_positions)
        self.parent_group = parent_group
        self.embedding = embedding
        self.dim = self.elements[0].dim
        self.conductor = self.elements[0].conductor
        self._index = {m.key(): i for i, m in enumerate(self.elements)}
        self.cache: Dict[str, object] = {}

    def __repr__(self) -> str:
        return f"FiniteMatrixGroup({self.name!r}, order={self.order}, dim={self.dim})"

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def locate(self, m: RepMatrix) -> Optional[int]:
        """Index of the element equal to m, or None."""
        if m.dim != self.dim:
            return None
        if self.conductor % m.conductor == 0:
            return self._index.get(m.key(self.conductor))
        for i, e in enumerate(self.elements):
            if e == m:
                return i
        return None

    def word(self, i: int) -> List[int]:
        """Generator indices s_1, ..., s_k with elements[i] = g_{s_1} ... g_{s_k}."""
        out = []
        while i != 0:
            out.append(int(self.via[i]))
            i = int(self.parent[i])
        return out[::-1]

    @cached_property
    def inv(self) -> np.ndarray:
        return np.argmax(self.table == 0, axis=1)

    @cached_property
    def element_orders(self) -> np.ndarray:
        n = self.order
        idx = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        power = idx.copy()
        k = 1
        while (orders == 0).any():
            orders[(power == 0) & (orders == 0)] = k
            power = self.table[power, idx]
            k += 1
        return orders

    @cached_property
    def exponent(self) -> int:
        e = 1
        for o in np.unique(self.element_orders):
            e = lcm(e, int(o))
        return e

    def power(self, i: int, k: int) -> int:
        k %= int(self.element_orders[i])
        result = 0
        base = i
        while k:
            if k & 1:
                result = int(self.table[result, base])
            base = int(self.table[base, base])
            k >>= 1
        return result

    @cached_property
    def _class_data(self) -> Tuple[List[np.ndarray], np.ndarray]:
        n = self.order
        idx = np.arange(n)
        class_of = np.full(n, -1, dtype=np.int64)
        classes = []
        for x in range(n):
            if class_of[x] >= 0:
                continue
            orbit = np.unique(self.table[self.table[self.inv, x], idx])
            class_of[orbit] = len(classes)
            classes.append(orbit)
        return classes, class_of

    @property
    def classes(self) -> List[np.ndarray]:
        """Conjugacy classes as sorted index arrays; the identity class comes first."""
        return self._class_data[0]

    @property
    def class_of(self) -> np.ndarray:
        return self._class_data[1]

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    @cached_property
    def class_reps(self) -> List[int]:
        return [int(c[0]) for c in self.classes]

    @cached_property
    def class_sizes(self) -> List[int]:
        return [len(c) for c in self.classes]

    def power_map(self, k: int) -> List[int]:
        """Class of g^k for g in each class."""
        return [int(self.class_of[self.power(r, k)]) for r in self.class_reps]

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def center(self) -> 'FiniteMatrixGroup':
        members = [c[0] for c in self.classes if len(c) == 1]
        return subgroup(self, members, name=f"Z({self.name})")

    def root(self) -> Tuple['FiniteMatrixGroup', np.ndarray]:
        """The outermost ambient group and the embedding of this group's elements into it."""
        group, emb = self, np.arange(self.order)
        while group.parent_group is not None:
            emb = group.embedding[emb]
            group = group.parent_group
        return group, emb

    def to_json(self) -> Dict:
        return {"dim": self.dim, "generators": [g.to_json() for g in self.generators]}


def _check_generators(generators: Sequence[RepMatrix]) -> int:
    if not generators:
        raise InputError("A group needs at least one generator")
    dim = generators[0].dim
    if any(g.dim != dim for g in generators):
        raise DimensionError("Generators must share one dimension")
    for i, g in enumerate(generators):
        if g.det() == 0:
            raise SingularGeneratorError(f"Generator {i} is singular")
    n = 1
    for g in generators:
        n = lcm(n, g.conductor)
    return n


def closure(generators: Sequence[RepMatrix], max_order: Optional[int] = None, name: str = '') -> FiniteMatrixGroup:
    """
    Enumerate the group generated by a list of invertible matrices.

    Breadth-first product closure from the identity with right multiplication by the generators in index
    order; matrices are deduplicated by their exact entry encoding at the common conductor.

    Parameters:
    generators (list): Invertible square matrices of one dimension.
    max_order (int): Abort beyond this order; defaults to CUSPLAB_MAX_ORDER.
    name (str): Label used in logs and reports.

    Returns:
    FiniteMatrixGroup: The enumerated group.

    Raises:
    SingularGeneratorError: If a generator has determinant 0.
    GroupOrderExceededError: If more than max_order elements are found.
    """
    bound = max_order if max_order is not None else config.max_order()
    n = _check_generators(generators)
    gens = [g.embed(n) for g in generators]
    identity = RepMatrix.identity(gens[0].dim).embed(n)
    elements = [identity]
    index = {identity.key(): 0}
    parent = [-1]
    via = [-1]
    right: List[List[int]] = []
    pos = 0
    while pos < len(elements):
        current = elements[pos]
        row = []
        for s, g in enumerate(gens):
            prod = current @ g
            k = prod.key()
            found = index.get(k)
            if found is None:
                found = len(elements)
                if found >= bound:
                    raise GroupOrderExceededError(f"Group {name or '<unnamed>'} is not finite within the bound {bound} (CUSPLAB_MAX_ORDER)")
                index[k] = found
                elements.append(prod)
                parent.append(pos)
                via.append(s)
            row.append(found)
        right.append(row)
        pos += 1
    size = len(elements)
    right_arr = np.array(right, dtype=np.int64).reshape(size, len(gens))
    parent_arr = np.array(parent, dtype=np.int64)
    via_arr = np.array(via, dtype=np.int64)
    table = _table_from_tree(right_arr, parent_arr, via_arr)
    logging.info(f"Closure of {name or '<unnamed>'} reached order {size}")
    return FiniteMatrixGroup(name, gens, elements, table, parent_arr, via_arr, [int(v) for v in right_arr[0]])


def _table_from_tree(right: np.ndarray, parent: np.ndarray, via: np.ndarray) -> np.ndarray:
    # e_i e_j = (e_i e_parent(j)) g_via(j), filled column by column in BFS order.
    size = right.shape[0]
    table = np.empty((size, size), dtype=np.int64)
    table[:, 0] = np.arange(size)
    for j in range(1, size):
        table[:, j] = right[table[:, parent[j]], via[j]]
    return table


def generated_indices(group: FiniteMatrixGroup, gens: Sequence[int]) -> np.ndarray:
    """Sorted element indices of the subgroup generated by the given elements."""
    members = np.zeros(group.order, dtype=bool)
    members[0] = True
    frontier = np.array([0])
    gens = np.asarray(list(gens), dtype=np.int64)
    if gens.size == 0:
        return np.array([0])
    while frontier.size:
        products = np.unique(group.table[np.ix_(frontier, gens)])
        fresh = products[~members[products]]
        members[fresh] = True
        frontier = fresh
    return np.flatnonzero(members)


def subgroup(group: FiniteMatrixGroup, members: Sequence[int], name: str = '') -> FiniteMatrixGroup:
    """
    Build the subgroup on a closed set of element indices of group.

    Generators are chosen greedily (the smallest index not yet generated); elements are then re-listed in
    breadth-first order over those generators.

    Raises:
    NotASubgroupError: If the set is not closed under multiplication.
    """
    members = np.unique(np.asarray(list(members), dtype=np.int64))
    mask = np.zeros(group.order, dtype=bool)
    mask[members] = True
    if not mask[0] or not mask[group.table[np.ix_(members, members)]].all():
        raise NotASubgroupError(f"Elements do not form a subgroup of {group.name}")
    gens: List[int] = []
    covered = np.zeros(group.order, dtype=bool)
    covered[0] = True
    for x in members:
        if not covered[x]:
            gens.append(int(x))
            covered[generated_indices(group, gens)] = True
    order = [0]
    seen = {0: 0}
    parent = [-1]
    via = [-1]
    right: List[List[int]] = []
    pos = 0
    while pos < len(order):
        row = []
        for s, g in enumerate(gens):
            prod = int(group.table[order[pos], g])
            if prod not in seen:
                seen[prod] = len(order)
                order.append(prod)
                parent.append(pos)
                via.append(s)
            row.append(seen[prod])
        right.append(row)
        pos += 1
    emb = np.array(order, dtype=np.int64)
    lookup = np.full(group.order, -1, dtype=np.int64)
    lookup[emb] = np.arange(len(emb))
    table = lookup[group.table[np.ix_(emb, emb)]]
    gen_positions = [seen[g] for g in gens]
    if not gens:
        gen_positions = [0]
        gens = [0]
    return FiniteMatrixGroup(
        name or f"sub({group.name})",
        [group.elements[g] for g in gens],
        [group.elements[i] for i in emb],
        table,
        np.array(parent, dtype=np.int64),
        np.array(via, dtype=np.int64),
        gen_positions,
        parent_group=group,
        embedding=emb,
    )


def locate_subgroup(group: FiniteMatrixGroup, sub: FiniteMatrixGroup) -> np.ndarray:
    """
    Embedding of sub's elements into group's element indices.

    Raises:
    NotASubgroupError: If some element of sub is not in group.
    """
    if sub.parent_group is group:
        return sub.embedding
    emb = []
    for m in sub.elements:
        i = group.locate(m)
        if i is None:
            raise NotASubgroupError(f"{sub.name} is not contained in {group.name}")
        emb.append(i)
    return np.array(emb, dtype=np.int64)


def conjugacy_classes(group: FiniteMatrixGroup) -> List[np.ndarray]:
    """Partition of the element indices into conjugacy classes, the identity class first."""
    return group.classes


def commutator_subgroup(group: FiniteMatrixGroup) -> FiniteMatrixGroup:
    """The subgroup generated by all commutators a^-1 b^-1 a b."""
    if 'derived' not in group.cache:
        t = group.table
        inv_pairs = t[group.inv][:, group.inv]
        commutators = np.unique(t[inv_pairs, t])
        members = generated_indices(group, commutators.tolist())
        group.cache['derived'] = subgroup(group, members, name=f"[{group.name},{group.name}]")
    return group.cache['derived']


class LinearCharacter:
    """
    A homomorphism from a group to the roots of unity.

    Stored as exponents a_g modulo the group exponent e, with value zeta_e^(a_g) at element g.
    """

    def __init__(self, group: FiniteMatrixGroup, exps: np.ndarray, label: str = ''):
        self.group = group
        self.exps = np.asarray(exps, dtype=np.int64) % group.exponent
        self.label = label

    def value(self, i: int) -> CycNum:
        return zeta(self.group.exponent, int(self.exps[i]))

    def class_values(self) -> List[CycNum]:
        return [self.value(r) for r in self.group.class_reps]

    @property
    def order(self) -> int:
        e = self.group.exponent
        return e // gcd(e, *[int(a) for a in np.unique(self.exps)])

    def is_trivial(self) -> bool:
        return not self.exps.any()

    def is_quadratic(self) -> bool:
        return self.order == 2

    def _check(self, other: 'LinearCharacter') -> None:
        if other.group is not self.group:
            raise GroupMismatchError("Characters live on different groups")

    def __mul__(self, other: 'LinearCharacter') -> 'LinearCharacter':
        self._check(other)
        return LinearCharacter(self.group, self.exps + other.exps)

    def __pow__(self, k: int) -> 'LinearCharacter':
        return LinearCharacter(self.group, self.exps * k)

    def inverse(self) -> 'LinearCharacter':
        return LinearCharacter(self.group, -self.exps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearCharacter):
            return NotImplemented
        return other.group is self.group and bool((self.exps == other.exps).all())

    def __hash__(self) -> int:
        return hash((id(self.group), self.exps.tobytes()))

    def __repr__(self) -> str:
        return f"LinearCharacter({self.label or '?'}, order={self.order}, group={self.group.name})"

    def kernel(self) -> FiniteMatrixGroup:
        key = ("kernel", self.exps.tobytes())
        if key not in self.group.cache:
            members = np.flatnonzero(self.exps == 0)
            self.group.cache[key] = subgroup(self.group, members, name=f"ker({self.label or 'chi'})")
        return self.group.cache[key]

    def restrict(self, sub: FiniteMatrixGroup) -> 'LinearCharacter':
        emb = locate_subgroup(self.group, sub)
        e_g, e_h = self.group.exponent, sub.exponent
        scaled = self.exps[emb] * e_h
        if (scaled % e_g).any():
            raise CheckFailure("Restricted character values are not roots of unity of the subgroup exponent")
        return LinearCharacter(sub, scaled // e_g, label=f"{self.label}|{sub.name}")

    def to_json(self) -> Dict:
        return {"label": self.label, "order": self.order, "values": [v.to_json() for v in self.class_values()]}


def _abelianization(group: FiniteMatrixGroup) -> Tuple[np.ndarray, np.ndarray, List[int]]:
    derived = commutator_subgroup(group)
    d_members = derived.embedding
    coset_of = np.full(group.order, -1, dtype=np.int64)
    reps = []
    for x in range(group.order):
        if coset_of[x] < 0:
            coset_of[group.table[x, d_members]] = len(reps)
            reps.append(x)
    reps = np.array(reps, dtype=np.int64)
    qtable = coset_of[group.table[np.ix_(reps, reps)]]
    return coset_of, qtable, [int(coset_of[g]) for g in group.gen_positions]


def abelianization_invariants(group: FiniteMatrixGroup) -> List[int]:
    """
    Elementary divisors of G/[G,G].

    Relations among the generator images come from a spanning tree of the quotient's Cayley graph:
    a coset c reached by the exponent vector v_c gives v_c + e_s - v_{c g_s} for each generator s.
    """
    if 'ab_invariants' in group.cache:
        return group.cache['ab_invariants']
    coset_of, qtable, qgens = _abelianization(group)
    k = len(qgens)
    vectors: Dict[int, List[int]] = {0: [0] * k}
    queue = [0]
    relations = []
    while queue:
        c = queue.pop(0)
        for s, g in enumerate(qgens):
            t = int(qtable[c, g])
            step = list(vectors[c])
            step[s] += 1
            if t not in vectors:
                vectors[t] = step
                queue.append(t)
            else:
                rel = [a - b for a, b in zip(step, vectors[t])]
                if any(rel):
                    relations.append(rel)
    if not relations:
        relations = [[0] * k]
    snf = smith_normal_form(Matrix(relations), domain=ZZ)
    diag = [abs(int(snf[i, i])) for i in range(min(snf.shape))]
    invariants = sorted(d for d in diag if d != 1)
    size = 1
    for d in invariants:
        size *= d
    if 0 in invariants or size != qtable.shape[0]:
        raise CheckFailure(f"Abelianization of {group.name} has invariants {invariants} but order {qtable.shape[0]}")
    group.cache['ab_invariants'] = invariants
    return invariants


def linear_characters(group: FiniteMatrixGroup) -> List[LinearCharacter]:
    """
    All homomorphisms from the group to the roots of unity.

    They are the characters of the abelianization, built along a chain of subgroups of the quotient:
    a character of Q_i extends to Q_i<x> in t ways, where t is least with x^t in Q_i, by choosing a
    t-th root of its value at x^t.

    Parameters:
    group (FiniteMatrixGroup): The group.

    Returns:
    list: LinearCharacter objects, the trivial character first.
    """
    if 'linear_characters' in group.cache:
        return group.cache['linear_characters']
    e = group.exponent
    coset_of, qtable, _ = _abelianization(group)
    m = qtable.shape[0]
    in_sub = np.zeros(m, dtype=bool)
    in_sub[0] = True
    members = [0]
    chars = [np.zeros(m, dtype=np.int64)]
    for x in range(m):
        if in_sub[x]:
            continue
        powers = [0, x]
        while not in_sub[powers[-1]]:
            powers.append(int(qtable[powers[-1], x]))
        t = len(powers) - 1
        anchor = powers[-1]
        new_members = [int(qtable[q, powers[j]]) for j in range(t) for q in members]
        extended = []
        for chi in chars:
            b = int(chi[anchor])
            if b % t:
                raise CheckFailure("Character extension is not divisible; the quotient table is inconsistent")
            for j in range(t):
                a = (b // t + (e // t) * j) % e
                new = chi.copy()
                for j2 in range(t):
                    for q in members:
                        new[qtable[q, powers[j2]]] = (chi[q] + j2 * a) % e
                extended.append(new)
        chars = extended
        members = new_members
        in_sub[members] = True
    result = [LinearCharacter(group, chi[coset_of], label=f"lin{k}") for k, chi in enumerate(chars)]
    result[0].label = "trivial"
    group.cache['linear_characters'] = result
    return result


def quadratic_characters(group: FiniteMatrixGroup) -> List[LinearCharacter]:
    """Linear characters of order at most 2, the trivial character included."""
    return [chi for chi in linear_characters(group) if chi.order <= 2]


def index2_subgroups(group: FiniteMatrixGroup) -> List[FiniteMatrixGroup]:
    """Kernels of the nontrivial quadratic characters; these are exactly the index-2 subgroups."""
    out = []
    for chi in quadratic_characters(group):
        if chi.is_trivial():
            continue
        ker = chi.kernel()
        if 2 * ker.order != group.order:
            raise CheckFailure(f"Kernel of a quadratic character of {group.name} has order {ker.order}")
        out.append(ker)
    return out


def linear_character_from_generators(group: FiniteMatrixGroup, values: Sequence[CycNum],
                                     label: str = '') -> LinearCharacter:
    """
    Extend roots of unity prescribed on the generators to a linear character.

    Parameters:
    group (FiniteMatrixGroup): The group.
    values (list): One root of unity per generator.
    label (str): Name of the character.

    Returns:
    LinearCharacter: The character, checked to be multiplicative on the whole group.

    Raises:
    CheckFailure: If a value is not an exp(G)-th root of unity or the prescription is not multiplicative.
    """
    e = group.exponent
    gen_exps = []
    for v in values:
        found = root_of_unity_exponent(v)
        if found is None or (found[1] * e) % found[0]:
            raise CheckFailure(f"{v} is not a root of unity of order dividing {e}")
        gen_exps.append(found[1] * e // found[0])
    exps = np.zeros(group.order, dtype=np.int64)
    for i in range(1, group.order):
        exps[i] = exps[group.parent[i]] + gen_exps[group.via[i]]
    exps %= e
    for s, g in enumerate(group.gen_positions):
        if ((exps[group.table[:, g]] - exps - gen_exps[s]) % e).any():
            raise CheckFailure(f"Generator values do not define a linear character of {group.name}")
    return LinearCharacter(group, exps, label=label)
