import json
import logging
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from cusplab.chars import ClassFunction, character_table
from cusplab.exactla import RepMatrix, block_diag
from cusplab.exceptions import ConsistencyError, InputError, UnknownCatalogError
from cusplab.groups import FiniteMatrixGroup, closure, commutator_subgroup, linear_characters, subgroup
from cusplab.reps import (
    Representation, asai_construct, induce_index2, inclusion, restrict, sym_power, tensor, twist,
)

logging.basicConfig(level=logging.INFO)

CATALOG_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'catalog_data')
GROUP_FILES = ['g192', 's5', 'd8', 'q8', 'sl23', 'sl25']


def read_group_data(source: str) -> Dict:
    """
    Read the JSON description of a group.

    Parameters:
    source (str): A catalog group name (see GROUP_FILES) or a path to a JSON file with the keys
        "name", "generators" and optionally "order" and "description".

    Returns:
    dict: The parsed JSON document.
    """
    if os.path.isfile(source):
        path = source
    elif source in GROUP_FILES:
        path = os.path.join(CATALOG_DIR, f"{source}.json")
    else:
        raise UnknownCatalogError(f"Unknown group {source!r}; catalog groups are {', '.join(GROUP_FILES)}")
    try:
        with open(path, 'r') as file:
            return json.load(file)
    except json.JSONDecodeError as e:
        raise InputError(f"Could not parse {path}: {e}")


@lru_cache(maxsize=None)
def load_group(source: str) -> FiniteMatrixGroup:
    """Enumerate a catalog or user-supplied group, checking a declared order when present."""
    data = read_group_data(source)
    try:
        gens = [RepMatrix.from_json(m) for m in data["generators"]]
    except (KeyError, TypeError) as e:
        raise InputError(f"Group description {source!r} has no usable generators: {e}")
    group = closure(gens, name=str(data.get("name", source)))
    declared = data.get("order")
    if declared is not None and int(declared) != group.order:
        raise ConsistencyError(f"Group {group.name} declares order {declared} but closes at {group.order}")
    return group


def displayed_wedge2_images() -> List[RepMatrix]:
    """The exterior square images of the g192 generators as tabulated in the catalog data file."""
    data = read_group_data('g192')
    return [RepMatrix.from_json(m) for m in data["displayed_wedge2_images"]]


def _corner(m: RepMatrix, start: int, size: int) -> RepMatrix:
    return RepMatrix([list(row[start:start + size]) for row in m.rows[start:start + size]])


def block_projection(group: FiniteMatrixGroup, start: int, size: int, name: str = '') -> Representation:
    """Representation of a block-diagonal matrix group on one diagonal block."""
    images = [_corner(g, start, size) for g in group.generators]
    return Representation(group, images, name=name or f"{group.name}[{start}:{start + size}]")


def direct_product(a: FiniteMatrixGroup, b: FiniteMatrixGroup, name: str = '') -> FiniteMatrixGroup:
    """a x b realized as block-diagonal matrices."""
    one_a = RepMatrix.identity(a.dim)
    one_b = RepMatrix.identity(b.dim)
    gens = [block_diag(g, one_b) for g in a.generators] + [block_diag(one_a, h) for h in b.generators]
    return closure(gens, name=name or f"{a.name}x{b.name}")


def wreath_square(a: FiniteMatrixGroup, name: str = '') -> FiniteMatrixGroup:
    """(a x a) extended by the block swap, as 2d x 2d matrices."""
    d = a.dim
    one = RepMatrix.identity(d)
    zero = RepMatrix.zeros(d)
    swap = RepMatrix.from_blocks([[zero, one], [one, zero]])
    return closure([block_diag(g, one) for g in a.generators] + [swap], name=name or f"{a.name}wr2")


def block_diagonal_part(group: FiniteMatrixGroup, size: int) -> FiniteMatrixGroup:
    """The index-2 subgroup of a wreath square consisting of its block-diagonal elements."""
    members = [
        i for i, m in enumerate(group.elements)
        if not any(m.rows[r][c] for r in range(size) for c in range(size, 2 * size))
    ]
    return subgroup(group, members, name=f"{group.name}_diag")


@lru_cache(maxsize=None)
def wreath_input(base: str) -> Tuple[FiniteMatrixGroup, Representation]:
    """The wreath square of a catalog group and the first-factor representation of its diagonal part."""
    a = load_group(base)
    group = wreath_square(a, name=f"{base}wr2")
    h = block_diagonal_part(group, a.dim)
    return group, block_projection(h, 0, a.dim, name=f"{base}_1")


@lru_cache(maxsize=None)
def product_factors(left: str, right: str) -> Tuple[Representation, Representation]:
    """The two block representations of the direct product of two catalog groups."""
    a, b = load_group(left), load_group(right)
    group = direct_product(a, b, name=f"{left}x{right}")
    return block_projection(group, 0, a.dim, name=left), block_projection(group, a.dim, b.dim, name=right)


def _product_tensor(left: str, right: str) -> Representation:
    first, second = product_factors(left, right)
    rep = tensor(first, second)
    rep.name = f"{left}x{right}"
    return rep


# columns e_i - e_5 for i < 5 span the sum-zero subspace; e_5 completes the basis
_S5_BASIS = RepMatrix([[1 if r == c else (-1 if r == 4 and c < 4 else 0) for c in range(5)] for r in range(5)])


def _s5std() -> Representation:
    """The permutation representation of S5 with its trivial summand split off by a change of basis."""
    s5 = load_group('s5')
    back = _S5_BASIS.inverse()
    images = [_corner(back @ g @ _S5_BASIS, 0, 4) for g in s5.generators]
    return Representation(s5, images, name='s5std')


def _a5std() -> Representation:
    s5 = load_group('s5')
    a5 = commutator_subgroup(s5)
    a5.name = 'a5'
    rep = restrict(_s5std(), a5)
    rep.name = 'a5std'
    return rep


def _asai(base: str) -> Representation:
    group, tau = wreath_input(base)
    rep = asai_construct(tau, group)
    rep.name = f"asai({base})"
    return rep


def _induced(base: str) -> Representation:
    group, tau = wreath_input(base)
    rep = induce_index2(tau, group)
    rep.name = f"ind({base})"
    return rep


def _sl25sym3() -> Representation:
    rep = sym_power(inclusion(load_group('sl25'), name='sl25'), 3)
    rep.name = 'sl25sym3'
    return rep


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    dim: int
    description: str
    build: Callable[[], Union[Representation, ClassFunction]]


ENTRIES: Dict[str, CatalogEntry] = {e.name: e for e in [
    CatalogEntry('g192', 4, "inclusion of the order 192 group; no self-duality, no self-twist",
                 lambda: inclusion(load_group('g192'), name='g192')),
    CatalogEntry('s5std', 4, "standard representation of S5", _s5std),
    CatalogEntry('a5std', 4, "standard representation restricted to A5", _a5std),
    CatalogEntry('sl23xsl23', 4, "external tensor product of the 2-dimensional SL(2,3) representations",
                 lambda: _product_tensor('sl23', 'sl23')),
    CatalogEntry('d8xq8', 4, "external tensor product of the D8 and Q8 2-dimensional representations",
                 lambda: _product_tensor('d8', 'q8')),
    CatalogEntry('d8xsl23', 4, "external tensor product of the D8 and SL(2,3) 2-dimensional representations",
                 lambda: _product_tensor('d8', 'sl23')),
    CatalogEntry('asai(sl23)', 4, "twisted tensor of SL(2,3) over its wreath square", lambda: _asai('sl23')),
    CatalogEntry('asai(d8)', 4, "twisted tensor of D8 over its wreath square", lambda: _asai('d8')),
    CatalogEntry('ind(d8)', 4, "induction of a D8 factor to its wreath square", lambda: _induced('d8')),
    CatalogEntry('ind(sl23)', 4, "induction of an SL(2,3) factor to its wreath square", lambda: _induced('sl23')),
    CatalogEntry('sl25sym3', 4, "symmetric cube of the 2-dimensional SL(2,5) representation", _sl25sym3),
    CatalogEntry('d8', 2, "dihedral group of order 8 on the plane", lambda: inclusion(load_group('d8'), name='d8')),
    CatalogEntry('q8', 2, "quaternion group", lambda: inclusion(load_group('q8'), name='q8')),
    CatalogEntry('sl23', 2, "binary tetrahedral group", lambda: inclusion(load_group('sl23'), name='sl23')),
    CatalogEntry('sl25', 2, "binary icosahedral group", lambda: inclusion(load_group('sl25'), name='sl25')),
]}


def names(dim: Optional[int] = None) -> List[str]:
    return [name for name, entry in ENTRIES.items() if dim is None or entry.dim == dim]


@lru_cache(maxsize=None)
def representation(name: str) -> Representation:
    """
    Build (once) the catalog representation with the given name.

    Raises:
    UnknownCatalogError: If the name is not in the catalog.
    """
    if name not in ENTRIES:
        raise UnknownCatalogError(f"Unknown catalog entry {name!r}; available: {', '.join(ENTRIES)}")
    rep = ENTRIES[name].build()
    logging.info(f"Catalog entry {name}: dim {rep.dim} representation of a group of order {rep.group.order}")
    return rep


def resolve(source: str, rep_path: Optional[str] = None) -> Representation:
    """
    Representation named on the command line.

    A catalog entry name gives that entry; a catalog group name or a group JSON path gives the defining
    representation, or the representation read from rep_path when one is supplied.
    """
    if rep_path is None and source in ENTRIES:
        return representation(source)
    group = load_group(source)
    if rep_path is None:
        return inclusion(group)
    try:
        with open(rep_path, 'r') as file:
            data = json.load(file)
    except (OSError, json.JSONDecodeError) as e:
        raise InputError(f"Could not read representation {rep_path}: {e}")
    return Representation.from_json(data, group, name=os.path.splitext(os.path.basename(rep_path))[0])


def _sl25deg4() -> ClassFunction:
    table = character_table(load_group('sl25'))
    first, second = [chi for chi in table.characters if chi.degree == 2]
    chi = first * second
    chi.label = 'sl25deg4'
    return chi


CHARACTER_ENTRIES: Dict[str, CatalogEntry] = {e.name: e for e in [
    CatalogEntry('sl25deg4', 4, "product of the two degree 2 characters of SL(2,5)", _sl25deg4),
]}


def character(name: str) -> ClassFunction:
    """
    Character of a catalog entry.

    Parameters:
    name (str): A representation entry or a character-level entry (see CHARACTER_ENTRIES).

    Returns:
    ClassFunction: The character, on the entry's group.

    Raises:
    UnknownCatalogError: If the name is in neither list.
    """
    if name in CHARACTER_ENTRIES:
        return CHARACTER_ENTRIES[name].build()
    return representation(name).character


def catalog_frame() -> pd.DataFrame:
    """Listing of the catalog entries without building them."""
    rows = [{'name': e.name, 'dim': e.dim, 'level': 'matrix', 'description': e.description} for e in ENTRIES.values()]
    rows += [{'name': e.name, 'dim': e.dim, 'level': 'character', 'description': e.description}
             for e in CHARACTER_ENTRIES.values()]
    return pd.DataFrame(rows, columns=['name', 'dim', 'level', 'description'])


FUZZ_BASES = ['d8', 'q8', 'sl23']
FUZZ_KINDS = ['tensor', 'induced', 'asai']


def _pick(rng, items: Sequence):
    return items[int(rng.integers(len(items)))]


def random_four_dim(rng) -> Representation:
    """
    One seeded random build: a tensor product, an induction or a twisted tensor of twisted 2-dimensional
    catalog representations, finally twisted by a random linear character. The result may be reducible.
    """
    kind = _pick(rng, FUZZ_KINDS)
    if kind == 'tensor':
        first, second = product_factors(_pick(rng, FUZZ_BASES), _pick(rng, FUZZ_BASES))
        rep = tensor(twist(first, _pick(rng, linear_characters(first.group))), second)
    else:
        group, tau = wreath_input(_pick(rng, FUZZ_BASES))
        tau = twist(tau, _pick(rng, linear_characters(tau.group)))
        if kind == 'induced':
            rep = induce_index2(tau, group)
        else:
            rep = asai_construct(tau, group, sign=_pick(rng, [1, -1]))
    return twist(rep, _pick(rng, linear_characters(rep.group)))


def fuzz_representations(count: int, seed: int = 0) -> List[Representation]:
    """
    Irreducible 4-dimensional representations from seeded random builds.

    Build t draws from numpy.random.default_rng([seed, t]); reducible builds are skipped.

    Raises:
    InputError: If count is negative.
    ConsistencyError: If 20 * count builds do not yield count irreducible ones.
    """
    if count < 0:
        raise InputError("count must be non-negative")
    out = []
    for t in range(20 * count):
        if len(out) == count:
            break
        rep = random_four_dim(np.random.default_rng([seed, t]))
        if rep.character.norm() == 1:
            rep.name = f"fuzz{t}({rep.name})"
            out.append(rep)
    if len(out) < count:
        raise ConsistencyError(f"Only {len(out)} of {count} random builds were irreducible")
    logging.info(f"Built {count} random irreducible representations from seed {seed}")
    return out
