import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Set, Tuple

import pandas as pd

from cusplab.chars import ClassFunction, constituent_degrees, inner_product, sym2_character, wedge2_character
from cusplab.exactla import commutant
from cusplab.exceptions import ConsistencyError, DegenerateFormError, DimensionError, NotIrreducibleError
from cusplab.groups import FiniteMatrixGroup, LinearCharacter, index2_subgroups, linear_characters
from cusplab.reps import (
    ALTERNATING, SYMMETRIC, BilinearForm, Representation, asai_construct, induce_witness, invariant_form, restrict,
    wedge2,
)

logging.basicConfig(level=logging.INFO)

PROPER = 'proper'
IMPROPER = 'improper'

TENSOR_TYPE = 'tensor_type'
ASAI_TYPE = 'asai_type'
SYMPLECTIC_TYPE = 'symplectic_type'
INDUCED_TYPE = 'induced_type'


def is_irreducible(rep: Representation) -> bool:
    """
    Irreducibility decided twice: by Schur (commutant of the generator images is the scalars) and by
    the character norm <chi, chi> = 1.

    Raises:
    ConsistencyError: If the two methods disagree.
    """
    schur = commutant(rep.generator_images)[0] == 1
    by_norm = rep.character.norm() == 1
    if schur != by_norm:
        raise ConsistencyError(f"Irreducibility of {rep.name}: commutant says {schur}, character norm says {by_norm}")
    return schur


def _require_irreducible(rep: Representation) -> None:
    if rep.character.norm() != 1:
        raise NotIrreducibleError(f"{rep.name} is not irreducible")


@dataclass
class SelfDualTwist:
    character: LinearCharacter
    kind: str

    def to_json(self) -> Dict:
        return {"character": self.character.to_json(), "type": self.kind}


def essential_selfduals(rep: Representation) -> List[SelfDualTwist]:
    """
    All linear characters chi with dual(rep) ~ chi (x) rep, tagged symplectic or orthogonal.

    The tag records which of the exterior or symmetric square contains chi^-1; for an irreducible
    representation exactly one of them does.

    Raises:
    ConsistencyError: If chi^-1 occurs in both squares or in neither.
    """
    _require_irreducible(rep)
    chi_rep = rep.character
    dual_char = chi_rep.conj()
    wedge = wedge2_character(chi_rep)
    sym = sym2_character(chi_rep)
    out = []
    for chi in linear_characters(rep.group):
        if ClassFunction.from_linear(chi) * chi_rep != dual_char:
            continue
        target = ClassFunction.from_linear(chi.inverse())
        in_wedge = inner_product(wedge, target) != 0
        in_sym = inner_product(sym, target) != 0
        if in_wedge == in_sym:
            raise ConsistencyError(f"{chi.label}^-1 occurs in {'both squares' if in_wedge else 'neither square'} of {rep.name}")
        out.append(SelfDualTwist(chi, ALTERNATING if in_wedge else SYMMETRIC))
    return out


def _symplectic(twists: List[SelfDualTwist]) -> List[SelfDualTwist]:
    return [t for t in twists if t.kind == ALTERNATING]


def _orthogonal(twists: List[SelfDualTwist]) -> List[SelfDualTwist]:
    return [t for t in twists if t.kind == SYMMETRIC]


def orthogonal_properness(rep: Representation, form: BilinearForm) -> str:
    """
    Decide whether rep lands in the connected similitude group of a symmetric form.

    rep is proper for the form when det rep(g) = lambda(g)^(dim/2) for all g, with lambda the
    similitude character; both sides are characters, so the generators suffice.

    Returns:
    str: 'proper' or 'improper'.

    Raises:
    DegenerateFormError: If the form is degenerate or not symmetric.
    ConsistencyError: If the defect character is not quadratic in the improper case.
    """
    if form.symmetry != SYMMETRIC:
        raise DegenerateFormError("Properness is defined for symmetric forms only")
    if not form.is_nondegenerate():
        raise DegenerateFormError(f"Invariant form of {rep.name} is degenerate")
    half = rep.dim // 2
    defect = rep.det_character * (form.similitude ** half).inverse()
    if defect.is_trivial():
        return PROPER
    if defect.order != 2:
        raise ConsistencyError(f"det / lambda^{half} has order {defect.order} for {rep.name}; expected 2")
    return IMPROPER


def quadratic_selftwists(rep: Representation) -> List[LinearCharacter]:
    """Nontrivial characters chi of order 2 with chi (x) rep ~ rep."""
    chi_rep = rep.character
    return [
        chi for chi in linear_characters(rep.group)
        if chi.order == 2 and ClassFunction.from_linear(chi) * chi_rep == chi_rep
    ]


def is_dihedral2(rep: Representation) -> bool:
    """
    A 2-dimensional irreducible representation is dihedral when it is induced from an index-2 subgroup.

    Decided by self-twists and, independently, by reducibility of the restriction to some index-2
    subgroup; the answers must agree.
    """
    if rep.dim != 2:
        raise DimensionError(f"is_dihedral2 expects a 2-dimensional representation, got {rep.dim}")
    _require_irreducible(rep)
    by_twist = bool(quadratic_selftwists(rep))
    by_restriction = any(restrict(rep, h).character.norm() != 1 for h in index2_subgroups(rep.group))
    if by_twist != by_restriction:
        raise ConsistencyError(f"Dihedrality of {rep.name}: self-twist says {by_twist}, restriction says {by_restriction}")
    return by_twist


def wedge2_invariant_subspace_dims(rep: Representation) -> List[int]:
    """Degrees of the irreducible constituents of the exterior square, ascending."""
    return constituent_degrees(wedge2_character(rep.character))


@dataclass
class KableReport:
    name: str
    wedge2_reducible: bool
    cond_a_symplectic: bool
    cond_b_selftwist: bool
    cond_c_proper_orthogonal: bool
    selfdual_twists: List[SelfDualTwist] = field(default_factory=list)
    selftwist_witness: Optional[LinearCharacter] = None
    symplectic_form: Optional[BilinearForm] = None
    orthogonal_forms: List[Tuple[BilinearForm, str]] = field(default_factory=list)
    wedge2_degrees: List[int] = field(default_factory=list)

    @property
    def equivalence_holds(self) -> bool:
        return self.wedge2_reducible == (self.cond_a_symplectic or self.cond_b_selftwist or self.cond_c_proper_orthogonal)

    @property
    def proper_form(self) -> Optional[BilinearForm]:
        return next((f for f, kind in self.orthogonal_forms if kind == PROPER), None)

    def summary(self) -> Dict:
        return {
            'name': self.name,
            'wedge2_reducible': self.wedge2_reducible,
            'a_symplectic': self.cond_a_symplectic,
            'b_selftwist': self.cond_b_selftwist,
            'c_proper_orthogonal': self.cond_c_proper_orthogonal,
            'wedge2_degrees': ' '.join(str(d) for d in self.wedge2_degrees),
            'equivalence_holds': self.equivalence_holds,
        }

    def to_json(self) -> Dict:
        data = dict(self.summary())
        data['wedge2_degrees'] = list(self.wedge2_degrees)
        data['selfdual_twists'] = [t.to_json() for t in self.selfdual_twists]
        data['selftwist_witness'] = self.selftwist_witness.to_json() if self.selftwist_witness else None
        data['symplectic_form'] = self.symplectic_form.to_json() if self.symplectic_form else None
        data['orthogonal_forms'] = [dict(form.to_json(), properness=kind) for form, kind in self.orthogonal_forms]
        return data


def _check_four_dim(rep: Representation) -> None:
    if rep.dim != 4:
        raise DimensionError(f"{rep.name} has dimension {rep.dim}; the classification needs dimension 4")
    _require_irreducible(rep)


def kable_classify(rep: Representation, seed: int = 0) -> KableReport:
    """
    Compute wedge2 reducibility and the three self-duality / self-twist conditions separately.

    Reducibility comes from the norm of the character of the matrix-built exterior square. Condition (a)
    comes from character multiplicities, (b) from character equality with quadratic twists, and (c)
    from explicit invariant symmetric forms and their properness.

    Parameters:
    rep (Representation): A 4-dimensional irreducible representation.
    seed (int): Seed of the random seed forms used to build invariant forms.

    Returns:
    KableReport: The flags, their witnesses and the exterior square constituent degrees.
    """
    _check_four_dim(rep)
    wedge_rep = wedge2(rep)
    reducible = wedge_rep.character.norm() != 1
    twists = essential_selfduals(rep)
    symplectic = _symplectic(twists)
    report = KableReport(
        name=rep.name,
        wedge2_reducible=reducible,
        cond_a_symplectic=bool(symplectic),
        cond_b_selftwist=False,
        cond_c_proper_orthogonal=False,
        selfdual_twists=twists,
        wedge2_degrees=constituent_degrees(wedge_rep.character),
    )
    if symplectic:
        report.symplectic_form = invariant_form(rep, symplectic[0].character, ALTERNATING, seed=seed)
    selftwists = quadratic_selftwists(rep)
    if selftwists:
        report.cond_b_selftwist = True
        report.selftwist_witness = selftwists[0]
    for t in _orthogonal(twists):
        form = invariant_form(rep, t.character, SYMMETRIC, seed=seed)
        if form is None:
            raise ConsistencyError(f"{rep.name} is orthogonal for {t.character.label} but has no symmetric form")
        report.orthogonal_forms.append((form, orthogonal_properness(rep, form)))
    report.cond_c_proper_orthogonal = any(kind == PROPER for _, kind in report.orthogonal_forms)
    logging.info(f"Classified {rep.name}: reducible={reducible}, a={report.cond_a_symplectic}, "
                 f"b={report.cond_b_selftwist}, c={report.cond_c_proper_orthogonal}")
    return report


def classify_gl4_analogue(rep: Representation, seed: int = 0) -> Set[str]:
    """
    Sort a 4-dimensional irreducible representation into the types whose exterior square is reducible.

    induced_type: a quadratic self-twist exists, and rep is rebuilt as an induced representation.
    symplectic_type: essentially self-dual of symplectic type.
    tensor_type: essentially self-dual of proper orthogonal type.
    asai_type: essentially self-dual of improper orthogonal type.

    The set may be empty and may have several members.
    """
    report = kable_classify(rep, seed=seed)
    flags = set()
    if report.cond_b_selftwist:
        induce_witness(rep, report.selftwist_witness)
        flags.add(INDUCED_TYPE)
    if report.cond_a_symplectic:
        flags.add(SYMPLECTIC_TYPE)
    if report.cond_c_proper_orthogonal:
        flags.add(TENSOR_TYPE)
    if any(kind == IMPROPER for _, kind in report.orthogonal_forms):
        flags.add(ASAI_TYPE)
    return flags


@dataclass
class AsaiRemarkReport:
    name: str
    irreducible: bool
    improper_orthogonal: bool
    tau_dihedral: bool
    has_selftwist: bool
    wedge2_reducible: bool

    @property
    def holds(self) -> bool:
        if not self.irreducible:
            return True
        return self.improper_orthogonal and self.tau_dihedral == self.has_selftwist == self.wedge2_reducible

    def to_json(self) -> Dict:
        return {
            'name': self.name, 'irreducible': self.irreducible, 'improper_orthogonal': self.improper_orthogonal,
            'tau_dihedral': self.tau_dihedral, 'has_selftwist': self.has_selftwist,
            'wedge2_reducible': self.wedge2_reducible, 'holds': self.holds,
        }


def asai_remark(tau: Representation, group: FiniteMatrixGroup, seed: int = 0) -> AsaiRemarkReport:
    """
    For sigma = As(tau) irreducible: sigma is improper orthogonal, and tau is dihedral exactly when sigma
    has a quadratic self-twist, exactly when the exterior square of sigma is reducible.
    """
    sigma = asai_construct(tau, group)
    if not is_irreducible(sigma):
        return AsaiRemarkReport(sigma.name, False, False, False, False, False)
    report = kable_classify(sigma, seed=seed)
    return AsaiRemarkReport(
        name=sigma.name,
        irreducible=True,
        improper_orthogonal=any(kind == IMPROPER for _, kind in report.orthogonal_forms),
        tau_dihedral=is_dihedral2(tau),
        has_selftwist=report.cond_b_selftwist,
        wedge2_reducible=report.wedge2_reducible,
    )


def kable_frame(reports: List[KableReport]) -> pd.DataFrame:
    """One row per report with the boolean flags and the exterior square degrees."""
    columns = ['name', 'wedge2_reducible', 'a_symplectic', 'b_selftwist', 'c_proper_orthogonal', 'wedge2_degrees',
               'equivalence_holds']
    return pd.DataFrame([r.summary() for r in reports], columns=columns)
