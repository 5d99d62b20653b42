from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from cusplab.exceptions import ConsistencyError, InputError, UnsupportedRankError

MAX_LEVI_N = 8


@dataclass(frozen=True)
class SignedPerm:
    """
    A signed permutation w of Z^r with w(e_i) = signs[i] e_perm[i] (0-based indices).
    """
    perm: Tuple[int, ...]
    signs: Tuple[int, ...]

    @classmethod
    def identity(cls, r: int) -> 'SignedPerm':
        return cls(tuple(range(r)), (1,) * r)

    @classmethod
    def from_matrix(cls, m: np.ndarray) -> 'SignedPerm':
        m = np.asarray(m, dtype=np.int64)
        perm, signs = [], []
        for i in range(m.shape[1]):
            j = int(np.flatnonzero(m[:, i])[0])
            perm.append(j)
            signs.append(int(m[j, i]))
        return cls(tuple(perm), tuple(signs))

    @property
    def rank(self) -> int:
        return len(self.perm)

    def matrix(self) -> np.ndarray:
        m = np.zeros((self.rank, self.rank), dtype=np.int64)
        for i, (j, s) in enumerate(zip(self.perm, self.signs)):
            m[j, i] = s
        return m

    def apply(self, x: Sequence[int]) -> np.ndarray:
        out = np.zeros(self.rank, dtype=np.int64)
        for i, (j, s) in enumerate(zip(self.perm, self.signs)):
            out[j] = s * x[i]
        return out

    def __mul__(self, other: 'SignedPerm') -> 'SignedPerm':
        # (self * other)(e_i) = self(other(e_i))
        perm = tuple(self.perm[other.perm[i]] for i in range(self.rank))
        signs = tuple(self.signs[other.perm[i]] * other.signs[i] for i in range(self.rank))
        return SignedPerm(perm, signs)

    def inverse(self) -> 'SignedPerm':
        perm = [0] * self.rank
        signs = [0] * self.rank
        for i, (j, s) in enumerate(zip(self.perm, self.signs)):
            perm[j] = i
            signs[j] = s
        return SignedPerm(tuple(perm), tuple(signs))

    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.rank)) and all(s == 1 for s in self.signs)

    def sign_changes(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    def __str__(self) -> str:
        return "[" + " ".join(f"{'-' if s < 0 else ''}{j + 1}" for j, s in zip(self.perm, self.signs)) + "]"


def is_positive(root: Sequence[int]) -> bool:
    """Positive roots of D_r have a positive first nonzero coordinate."""
    for x in root:
        if x:
            return x > 0
    return False


class RootSystemD:
    """
    Root system of type D_r in Z^r with Bourbaki simple roots a_i = e_i - e_(i+1) for i < r and
    a_r = e_(r-1) + e_r. Simple roots are numbered from 1 as in the Dynkin diagram.
    """

    def __init__(self, rank: int):
        if rank < 4:
            raise InputError(f"Type D needs rank at least 4, got {rank}")
        self.rank = rank

    @cached_property
    def simple_roots(self) -> Dict[int, np.ndarray]:
        r = self.rank
        roots = {}
        for i in range(1, r):
            a = np.zeros(r, dtype=np.int64)
            a[i - 1], a[i] = 1, -1
            roots[i] = a
        a = np.zeros(r, dtype=np.int64)
        a[r - 2], a[r - 1] = 1, 1
        roots[r] = a
        return roots

    def cartan_matrix(self) -> np.ndarray:
        r = self.rank
        c = np.zeros((r, r), dtype=np.int64)
        for i in range(1, r + 1):
            for j in range(1, r + 1):
                c[i - 1, j - 1] = int(self.simple_roots[i] @ self.simple_roots[j])
        return c

    @cached_property
    def positive_roots(self) -> List[np.ndarray]:
        r = self.rank
        roots = []
        for i in range(r):
            for j in range(i + 1, r):
                for s in (-1, 1):
                    a = np.zeros(r, dtype=np.int64)
                    a[i], a[j] = 1, s
                    roots.append(a)
        return roots

    def reflection(self, i: int) -> SignedPerm:
        """The simple reflection s_i as a signed permutation."""
        r = self.rank
        perm = list(range(r))
        signs = [1] * r
        if i < r:
            perm[i - 1], perm[i] = i, i - 1
        elif i == r:
            perm[r - 2], perm[r - 1] = r - 1, r - 2
            signs[r - 2] = signs[r - 1] = -1
        else:
            raise InputError(f"No simple root a_{i} in D_{r}")
        return SignedPerm(tuple(perm), tuple(signs))

    def length(self, w: SignedPerm) -> int:
        """Number of positive roots sent to negative roots."""
        return sum(1 for a in self.positive_roots if not is_positive(w.apply(a)))

    def longest_element(self, subset: Optional[Iterable[int]] = None) -> SignedPerm:
        """
        Longest element of the parabolic subgroup generated by the simple reflections in subset
        (all of them when subset is None), by greedy descent: multiply on the right by s_i while some
        a_i in the subset is still sent to a positive root.
        """
        subset = sorted(range(1, self.rank + 1) if subset is None else subset)
        w = SignedPerm.identity(self.rank)
        while True:
            ascent = next((i for i in subset if is_positive(w.apply(self.simple_roots[i]))), None)
            if ascent is None:
                return w
            w = w * self.reflection(ascent)

    def simple_index(self, root: Sequence[int]) -> Optional[int]:
        for i, a in self.simple_roots.items():
            if np.array_equal(a, root):
                return i
        return None


@dataclass
class LeviAction:
    n: int
    r: int
    action: Dict[int, int]
    a3_flipped: bool
    a_n_minus_1_flipped: bool
    alpha_r_minus_2_fixed: bool
    length_w0: int
    length_wG: int
    length_wM: int
    sigma_image: str
    pi_image: str

    def action_text(self) -> str:
        return " ".join(f"a{i}->a{j}" for i, j in sorted(self.action.items()))

    def to_json(self) -> Dict:
        return {
            "n": self.n, "r": self.r,
            "action": {str(i): j for i, j in sorted(self.action.items())},
            "a3_flipped": self.a3_flipped,
            "a_n_minus_1_flipped": self.a_n_minus_1_flipped,
            "alpha_r_minus_2_fixed": self.alpha_r_minus_2_fixed,
            "length_w0": self.length_w0, "length_wG": self.length_wG, "length_wM": self.length_wM,
            "sigma_image": self.sigma_image, "pi_image": self.pi_image,
        }


def levi_simple_roots(n: int) -> List[int]:
    """Simple roots of the Levi of type A_(n-1) x A_3 in D_(n+3)."""
    r = n + 3
    return list(range(1, n)) + [r - 2, r - 1, r]


def w0_for_levi(n: int) -> LeviAction:
    """
    Action of w0 = w_G w_M on the simple roots of the Levi M of type A_(n-1) x A_3 in D_(n+3).

    Parameters:
    n (int): Size of the GL(n) block, 1 to 8.

    Returns:
    LeviAction: The simple root map, both flip flags, lengths, and the resulting images of the
    sigma (GL(n)) and Pi (GL(4)) parts of the inducing data.

    Raises:
    UnsupportedRankError: If n is outside 1..8.
    ConsistencyError: If w0 does not permute the Levi's simple roots.
    """
    if not 1 <= n <= MAX_LEVI_N:
        raise UnsupportedRankError(f"n must lie in 1..{MAX_LEVI_N}, got {n}")
    r = n + 3
    system = RootSystemD(r)
    levi = levi_simple_roots(n)
    w_g = system.longest_element()
    w_m = system.longest_element(levi)
    w0 = w_g * w_m
    action = {}
    for i in levi:
        j = system.simple_index(w0.apply(system.simple_roots[i]))
        if j is None or j not in levi:
            raise ConsistencyError(f"w0 sends a_{i} outside the Levi's simple roots for n={n}")
        action[i] = j
    if sorted(action.values()) != levi:
        raise ConsistencyError(f"w0 does not permute the Levi's simple roots for n={n}")
    a3_flipped = action[r - 1] == r and action[r] == r - 1
    a_n_flipped = n >= 2 and all(action[j] == n - j for j in range(1, n))
    return LeviAction(
        n=n,
        r=r,
        action=action,
        a3_flipped=a3_flipped,
        a_n_minus_1_flipped=a_n_flipped,
        alpha_r_minus_2_fixed=action[r - 2] == r - 2,
        length_w0=system.length(w0),
        length_wG=system.length(w_g),
        length_wM=system.length(w_m),
        sigma_image="dual(sigma)",
        pi_image="dual(Pi) (x) omega_sigma" if a3_flipped else "Pi (x) omega_sigma",
    )


def weyl_frame(ns: Iterable[int]) -> pd.DataFrame:
    """One row per n with the simple root map, flip flags and lengths."""
    rows = []
    for n in ns:
        act = w0_for_levi(n)
        rows.append({
            'n': act.n, 'r': act.r, 'action': act.action_text(), 'a3_flipped': act.a3_flipped,
            'a_n_minus_1_flipped': act.a_n_minus_1_flipped, 'alpha_r_minus_2_fixed': act.alpha_r_minus_2_fixed,
            'length_w0': act.length_w0, 'sigma_image': act.sigma_image, 'pi_image': act.pi_image,
        })
    columns = ['n', 'r', 'action', 'a3_flipped', 'a_n_minus_1_flipped', 'alpha_r_minus_2_fixed', 'length_w0',
               'sigma_image', 'pi_image']
    return pd.DataFrame(rows, columns=columns)
