import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from cusplab.cyclotomic import CycNum, as_cycnum, rational
from cusplab.exactla import (
    CharPoly, RepMatrix, block_diag, random_invertible, swap_matrix, sym2_matrix, tensor_matrix, wedge2_matrix,
)
from cusplab.exceptions import DimensionError, InputError, UnknownIdentityError

logging.basicConfig(level=logging.INFO)


class SemisimpleParam:
    """
    A semisimple conjugacy class, held as an exact invertible matrix and compared by its
    characteristic polynomial.
    """

    def __init__(self, matrix: RepMatrix):
        if not isinstance(matrix, RepMatrix):
            matrix = RepMatrix(matrix)
        if not matrix.det():
            raise InputError("A parameter must be invertible")
        self.matrix = matrix

    @property
    def dim(self) -> int:
        return self.matrix.dim

    @cached_property
    def fingerprint(self) -> CharPoly:
        return self.matrix.charpoly()

    def __eq__(self, other) -> bool:
        if not isinstance(other, SemisimpleParam):
            return NotImplemented
        return self.fingerprint == other.fingerprint

    def __hash__(self) -> int:
        return hash(self.fingerprint)

    def __repr__(self) -> str:
        return f"SemisimpleParam(dim={self.dim}, charpoly={self.fingerprint})"

    def to_json(self) -> Dict:
        return {"matrix": self.matrix.to_json(), "charpoly": self.fingerprint.to_json()}


def param(*values) -> SemisimpleParam:
    """Diagonal parameter diag(values)."""
    return SemisimpleParam(RepMatrix.diag(values))


class PlaceKind(Enum):
    SPLIT = 'split'
    INERT = 'inert'

    @property
    def omega(self) -> int:
        """Value of the quadratic character of E/F at the place."""
        return 1 if self is PlaceKind.SPLIT else -1


class IsobaricSide:
    """A formal isobaric sum of parameters; its fingerprint is the product of the summands' fingerprints."""

    def __init__(self, parts: Sequence[SemisimpleParam]):
        self.parts = list(parts)

    @property
    def dim(self) -> int:
        return sum(p.dim for p in self.parts)

    @cached_property
    def fingerprint(self) -> CharPoly:
        poly = self.parts[0].fingerprint
        for p in self.parts[1:]:
            poly = poly * p.fingerprint
        return poly

    def __repr__(self) -> str:
        return " [+] ".join(repr(p) for p in self.parts)


def _need(t: SemisimpleParam, dim: int, what: str) -> None:
    if t.dim != dim:
        raise DimensionError(f"{what} expects a {dim}-dimensional parameter, got {t.dim}")


def tensorp(t1: SemisimpleParam, t2: SemisimpleParam) -> SemisimpleParam:
    return SemisimpleParam(tensor_matrix(t1.matrix, t2.matrix))


def tensor22(t1: SemisimpleParam, t2: SemisimpleParam) -> SemisimpleParam:
    _need(t1, 2, "tensor22")
    _need(t2, 2, "tensor22")
    return tensorp(t1, t2)


def wedge2p(t: SemisimpleParam) -> SemisimpleParam:
    if t.dim < 2:
        raise DimensionError("The exterior square needs a parameter of dimension at least 2")
    return SemisimpleParam(wedge2_matrix(t.matrix))


def sym2p(t: SemisimpleParam) -> SemisimpleParam:
    return SemisimpleParam(sym2_matrix(t.matrix))


def scale(t: SemisimpleParam, c) -> SemisimpleParam:
    return SemisimpleParam(t.matrix * as_cycnum(c))


def dualp(t: SemisimpleParam) -> SemisimpleParam:
    return SemisimpleParam(t.matrix.inverse().transpose())


def detp(t: SemisimpleParam) -> SemisimpleParam:
    return param(t.matrix.det())


def adjointp(t: SemisimpleParam) -> SemisimpleParam:
    """Sym^2 t twisted by det t^-1."""
    _need(t, 2, "adjointp")
    return scale(sym2p(t), t.matrix.det().inverse())


def induce_param(t_w: SemisimpleParam, kind: PlaceKind, t_w2: Optional[SemisimpleParam] = None) -> SemisimpleParam:
    """
    Local parameter of an induction from a quadratic extension.

    At a split place the two places above contribute diag(t_w, t_w2). At an inert place the
    Frobenius of F squares to the Frobenius of E, realized by the block matrix [[0, t_w], [I, 0]].
    """
    if kind is PlaceKind.SPLIT:
        if t_w2 is None:
            raise InputError("A split place needs the parameters at both places above it")
        _need(t_w2, t_w.dim, "induce_param")
        return SemisimpleParam(block_diag(t_w.matrix, t_w2.matrix))
    one = RepMatrix.identity(t_w.dim)
    zero = RepMatrix.zeros(t_w.dim)
    mat = RepMatrix.from_blocks([[zero, t_w.matrix], [one, zero]])
    square = SemisimpleParam(mat @ mat)
    if square.fingerprint != induce_param(t_w, PlaceKind.SPLIT, t_w).fingerprint:
        raise InputError("Inert induction does not square to the Frobenius of the extension")
    return SemisimpleParam(mat)


def asai_param(t_w: SemisimpleParam, kind: PlaceKind, t_w2: Optional[SemisimpleParam] = None) -> SemisimpleParam:
    """
    Local parameter of the twisted tensor transfer.

    Split: t_w (x) t_w2. Inert: (t_w (x) I) composed with the swap of tensor factors, whose square is
    t_w (x) t_w and whose characteristic polynomial is (x - a)(x - b)(x^2 - ab) for t_w = diag(a, b).
    """
    _need(t_w, 2, "asai_param")
    if kind is PlaceKind.SPLIT:
        if t_w2 is None:
            raise InputError("A split place needs the parameters at both places above it")
        return tensor22(t_w, t_w2)
    mat = tensor_matrix(t_w.matrix, RepMatrix.identity(2)) @ swap_matrix(2)
    return SemisimpleParam(mat)


def gsp4_param(a, b, nu) -> SemisimpleParam:
    """diag(a, b, nu/b, nu/a), a parameter in GSp(4) with similitude nu for the antidiagonal form."""
    a, b, nu = as_cycnum(a), as_cycnum(b), as_cycnum(nu)
    return param(a, b, nu / b, nu / a)


def _antidiagonal_form(dim: int) -> RepMatrix:
    half = dim // 2
    rows = [[0] * dim for _ in range(dim)]
    for i in range(half):
        rows[i][dim - 1 - i] = 1
        rows[dim - 1 - i][i] = -1
    return RepMatrix(rows)


def random_symplectic(rng, dim: int = 4, steps: int = 6, bound: int = 3) -> RepMatrix:
    """
    Random exact element of Sp(dim) for the antidiagonal form, as a product of symplectic transvections
    I + c v v^T J.
    """
    form = _antidiagonal_form(dim)
    result = RepMatrix.identity(dim)
    for _ in range(steps):
        v = [int(x) for x in rng.integers(-bound, bound + 1, size=dim)]
        if not any(v):
            continue
        c = int(rng.integers(1, bound + 1)) * (1 if rng.integers(0, 2) else -1)
        outer = RepMatrix([[v[i] * v[j] for j in range(dim)] for i in range(dim)])
        result = result @ (RepMatrix.identity(dim) + (outer @ form) * c)
    return result


def conjugate(t: SemisimpleParam, g: RepMatrix) -> SemisimpleParam:
    return SemisimpleParam(g @ t.matrix @ g.inverse())


# -- identity registry ------------------------------------------------------

MATRIX = 'matrix'
SCALAR = 'scalar'


@dataclass
class IdentityResult:
    identity: str
    kind: PlaceKind
    holds: bool
    lhs: CharPoly
    rhs: CharPoly
    convention_dependent: bool = False

    def to_json(self) -> Dict:
        return {
            "identity": self.identity, "kind": self.kind.value, "holds": self.holds,
            "lhs": self.lhs.to_json(), "rhs": self.rhs.to_json(), "convention_dependent": self.convention_dependent,
        }


@dataclass
class IdentitySpec:
    name: str
    description: str
    slots: Dict[PlaceKind, List[str]]
    build: Callable
    convention_dependent: Tuple[PlaceKind, ...] = ()


def _p31a(kind, inputs, rng):
    t1, t2 = inputs
    lhs = [wedge2p(tensor22(t1, t2))]
    rhs = [scale(sym2p(t1), t2.matrix.det()), scale(sym2p(t2), t1.matrix.det())]
    return lhs, rhs


def _p31b(kind, inputs, rng):
    t1, t2 = inputs
    lhs = [sym2p(tensor22(t1, t2))]
    rhs = [tensorp(sym2p(t1), sym2p(t2)), param(t1.matrix.det() * t2.matrix.det())]
    return lhs, rhs


def _p32(kind, inputs, rng):
    if kind is PlaceKind.SPLIT:
        t1, t2 = inputs
        lhs = [wedge2p(asai_param(t1, kind, t2))]
        rhs = [induce_param(scale(sym2p(t1), t2.matrix.det()), kind, scale(sym2p(t2), t1.matrix.det()))]
        return lhs, rhs
    # the conjugate central character at the inert place is read as det t_w
    (t,) = inputs
    lhs = [wedge2p(asai_param(t, kind))]
    rhs = [induce_param(scale(sym2p(t), t.matrix.det()), kind)]
    return lhs, rhs


def _p33(kind, inputs, rng):
    a, b, nu = inputs
    t = gsp4_param(a, b, nu)
    if rng is not None:
        t = conjugate(t, random_symplectic(rng))
    a, b, nu = as_cycnum(a), as_cycnum(b), as_cycnum(nu)
    r5 = param(a * b, a * nu / b, nu, b * nu / a, nu * nu / (a * b))
    return [wedge2p(t)], [param(nu), r5]


def _p34(kind, inputs, rng):
    omega = rational(kind.omega)
    if kind is PlaceKind.SPLIT:
        t1, t2 = inputs
        lhs = [wedge2p(induce_param(t1, kind, t2))]
        rhs = [scale(asai_param(t1, kind, t2), omega), induce_param(detp(t1), kind, detp(t2))]
        return lhs, rhs
    (t,) = inputs
    lhs = [wedge2p(induce_param(t, kind))]
    rhs = [scale(asai_param(t, kind), omega), induce_param(detp(t), kind)]
    return lhs, rhs


def _dihedral_input(kind, inputs) -> Tuple[SemisimpleParam, CycNum]:
    # parameter of I(chi) and the value of chi restricted to F
    if kind is PlaceKind.SPLIT:
        c1, c2 = (as_cycnum(c) for c in inputs)
        return induce_param(param(c1), kind, param(c2)), c1 * c2
    (c,) = inputs
    c = as_cycnum(c)
    return induce_param(param(c), kind), c


def _s63sym(kind, inputs, rng):
    t, chi_f = _dihedral_input(kind, inputs)
    if kind is PlaceKind.SPLIT:
        c1, c2 = (as_cycnum(c) for c in inputs)
        induced = induce_param(param(c1 * c1), kind, param(c2 * c2))
    else:
        c = as_cycnum(inputs[0])
        induced = induce_param(param(c * c), kind)
    return [sym2p(t)], [induced, param(chi_f)]


def _s63wedge(kind, inputs, rng):
    t, chi_f = _dihedral_input(kind, inputs)
    return [wedge2p(t)], [param(chi_f * kind.omega)]


def _adih(kind, inputs, rng):
    t, _ = _dihedral_input(kind, inputs)
    if kind is PlaceKind.SPLIT:
        c1, c2 = (as_cycnum(c) for c in inputs)
        induced = induce_param(param(c2 / c1), kind, param(c1 / c2))
    else:
        induced = induce_param(param(1), kind)
    return [adjointp(t)], [param(kind.omega), induced]


_SPLIT_ONLY_PAIR = {PlaceKind.SPLIT: [MATRIX, MATRIX]}
_EXTENSION_PAIR = {PlaceKind.SPLIT: [MATRIX, MATRIX], PlaceKind.INERT: [MATRIX]}
_CHARACTER = {PlaceKind.SPLIT: [SCALAR, SCALAR], PlaceKind.INERT: [SCALAR]}

IDENTITIES: Dict[str, IdentitySpec] = {s.name: s for s in [
    IdentitySpec('P31a', "wedge2(t1 (x) t2) = Sym2 t1 det t2 [+] Sym2 t2 det t1", _SPLIT_ONLY_PAIR, _p31a),
    IdentitySpec('P31b', "Sym2(t1 (x) t2) = Sym2 t1 (x) Sym2 t2 [+] det t1 det t2", _SPLIT_ONLY_PAIR, _p31b),
    IdentitySpec('P32', "wedge2 As(t) = I(Sym2 t (x) conjugate central character)", _EXTENSION_PAIR, _p32,
                 convention_dependent=(PlaceKind.INERT,)),
    IdentitySpec('P33', "wedge2 of a GSp(4) parameter = similitude [+] 5-dimensional part",
                 {PlaceKind.SPLIT: [SCALAR, SCALAR, SCALAR]}, _p33),
    IdentitySpec('P34', "wedge2 I(t) = As(t) omega [+] I(det t)", _EXTENSION_PAIR, _p34),
    IdentitySpec('S63sym', "Sym2 I(chi) = I(chi^2) [+] chi restricted to F", _CHARACTER, _s63sym),
    IdentitySpec('S63wedge', "wedge2 I(chi) = chi restricted to F times omega", _CHARACTER, _s63wedge),
    IdentitySpec('ADIH', "Ad I(chi) = omega [+] I(chi' / chi)", _CHARACTER, _adih),
]}


def list_identities() -> pd.DataFrame:
    rows = [{
        'identity': s.name,
        'description': s.description,
        'place_kinds': ','.join(k.value for k in s.slots),
        'convention_dependent': ','.join(k.value for k in s.convention_dependent),
    } for s in IDENTITIES.values()]
    return pd.DataFrame(rows, columns=['identity', 'description', 'place_kinds', 'convention_dependent'])


def _spec(name: str) -> IdentitySpec:
    if name not in IDENTITIES:
        raise UnknownIdentityError(f"Unknown identity {name!r}; registered: {', '.join(IDENTITIES)}")
    return IDENTITIES[name]


def _coerce_inputs(spec: IdentitySpec, kind: PlaceKind, inputs: Sequence) -> List:
    if kind not in spec.slots:
        raise InputError(f"Identity {spec.name} is not stated at {kind.value} places")
    slots = spec.slots[kind]
    if len(inputs) != len(slots):
        raise InputError(f"Identity {spec.name} at a {kind.value} place takes {len(slots)} inputs, got {len(inputs)}")
    out = []
    for slot, value in zip(slots, inputs):
        if slot == MATRIX:
            t = value if isinstance(value, SemisimpleParam) else SemisimpleParam(value)
            _need(t, 2, spec.name)
            out.append(t)
        else:
            c = as_cycnum(value)
            if not c:
                raise InputError(f"Identity {spec.name} needs nonzero scalar inputs")
            out.append(c)
    return out


def verify_identity(name: str, inputs: Sequence, kind: PlaceKind = PlaceKind.SPLIT, rng=None) -> IdentityResult:
    """
    Compare both sides of a registered parameter identity by characteristic polynomial.

    Parameters:
    name (str): Registered identity name, see list_identities().
    inputs (list): 2-dimensional parameters or nonzero scalars, as the identity requires at this place kind.
    kind (PlaceKind): Split or inert place.
    rng (numpy.random.Generator): Optional source for random conjugations of the left side.

    Returns:
    IdentityResult: Whether the fingerprints agree, with both fingerprints.
    """
    spec = _spec(name)
    values = _coerce_inputs(spec, kind, inputs)
    lhs, rhs = spec.build(kind, values, rng)
    left, right = IsobaricSide(lhs), IsobaricSide(rhs)
    if left.dim != right.dim:
        raise DimensionError(f"Identity {name}: sides have dimensions {left.dim} and {right.dim}")
    return IdentityResult(name, kind, left.fingerprint == right.fingerprint, left.fingerprint, right.fingerprint,
                          convention_dependent=kind in spec.convention_dependent)


def _random_scalar(rng, bound: int = 12, max_den: int = 4) -> Fraction:
    num = int(rng.integers(1, bound + 1)) * (1 if rng.integers(0, 2) else -1)
    return Fraction(num, int(rng.integers(1, max_den + 1)))


def random_inputs(spec: IdentitySpec, kind: PlaceKind, rng) -> List:
    """
    Random nonzero rational inputs with pairwise distinct eigenvalues, none the negative of another.

    Matrix inputs are diagonal parameters conjugated by a random invertible integer matrix.
    """
    slots = spec.slots[kind]
    count = sum(2 if s == MATRIX else 1 for s in slots)
    while True:
        values = [_random_scalar(rng) for _ in range(count)]
        if len({abs(v) for v in values}) == count:
            break
    out = []
    pos = 0
    for s in slots:
        if s == MATRIX:
            g = random_invertible(rng, 2)
            out.append(conjugate(param(values[pos], values[pos + 1]), g))
            pos += 2
        else:
            out.append(values[pos])
            pos += 1
    return out


@dataclass
class FuzzReport:
    identity: str
    seed: int
    trials: int
    failures: List[Dict] = field(default_factory=list)
    convention_dependent: List[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def to_json(self) -> Dict:
        return {
            "identity": self.identity, "seed": self.seed, "trials": self.trials,
            "failures": self.failures, "convention_dependent": self.convention_dependent,
        }


def fuzz(name: str, trials: int = 1000, seed: int = 0) -> FuzzReport:
    """
    Check an identity on seeded random exact inputs, `trials` times at each place kind it is stated for.

    Trial t at place kind number k draws from numpy.random.default_rng([seed, k, t]), so any single
    failing trial can be replayed on its own.
    """
    spec = _spec(name)
    report = FuzzReport(name, seed, trials, convention_dependent=[k.value for k in spec.convention_dependent])
    for k, kind in enumerate(spec.slots):
        for t in range(trials):
            rng = np.random.default_rng([seed, k, t])
            inputs = random_inputs(spec, kind, rng)
            result = verify_identity(name, inputs, kind, rng=rng)
            if not result.holds:
                report.failures.append({"kind": kind.value, "trial": t, "lhs": result.lhs.to_json(),
                                        "rhs": result.rhs.to_json()})
    logging.info(f"Identity {name}: {trials} trials per place kind, {len(report.failures)} failures")
    return report
