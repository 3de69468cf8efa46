# matroid.py
import itertools
import logging
from dataclasses import dataclass
from math import comb
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from services.linear_algebra import Subspace
from utils.config import DEFAULT_ENUMERATION_LIMIT, EXCHANGE_CHECK_MAX_ELEMENTS
from utils.errors import EnumerationTooLargeError, GroundSetError, MalformedInputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Matroid:
    """Explicit matroid: ground labels plus its basis family as bit masks over the ground order."""

    ground: Tuple[str, ...]
    rank: int
    bases: FrozenSet[int]

    def __post_init__(self):
        if not self.bases:
            raise MalformedInputError("a matroid needs at least one basis")
        if any(bin(basis).count("1") != self.rank for basis in self.bases):
            raise MalformedInputError(f"every basis must have size {self.rank}")
        if any(basis >> len(self.ground) for basis in self.bases):
            raise MalformedInputError("basis uses an element outside the ground set")

    @classmethod
    def from_bases(cls, ground: Sequence[str], bases: Iterable[Iterable[str]], check: bool = True) -> "Matroid":
        ground = tuple(str(label) for label in ground)
        if len(set(ground)) != len(ground):
            raise GroundSetError(f"ground labels repeat: {list(ground)}")
        position = {label: index for index, label in enumerate(ground)}
        masks = set()
        for basis in bases:
            mask = 0
            for label in basis:
                if str(label) not in position:
                    raise GroundSetError(f"basis element {label!r} not in ground set")
                mask |= 1 << position[str(label)]
            masks.add(mask)
        if not masks:
            raise MalformedInputError("a matroid needs at least one basis")
        rank = bin(next(iter(masks))).count("1")
        matroid = cls(ground, rank, frozenset(masks))
        if check and len(ground) <= EXCHANGE_CHECK_MAX_ELEMENTS and not matroid.satisfies_exchange():
            raise MalformedInputError("basis family violates the basis-exchange axiom")
        return matroid

    def mask_of(self, labels: Iterable[str]) -> int:
        position = {label: index for index, label in enumerate(self.ground)}
        mask = 0
        for label in labels:
            if str(label) not in position:
                raise GroundSetError(f"{label!r} not in ground set {list(self.ground)}")
            mask |= 1 << position[str(label)]
        return mask

    def labels_of(self, mask: int) -> List[str]:
        return [label for index, label in enumerate(self.ground) if mask >> index & 1]

    def basis_sets(self) -> List[List[str]]:
        """Bases as label lists, in a stable order."""
        return [self.labels_of(mask) for mask in sorted(self.bases, key=lambda mask: self.labels_index(mask))]

    def labels_index(self, mask: int) -> Tuple[int, ...]:
        return tuple(index for index in range(len(self.ground)) if mask >> index & 1)

    def rank_of(self, labels: Iterable[str]) -> int:
        mask = self.mask_of(labels)
        return max(bin(mask & basis).count("1") for basis in self.bases)

    def is_independent(self, labels: Iterable[str]) -> bool:
        mask = self.mask_of(labels)
        return self._independent_mask(mask)

    def _independent_mask(self, mask: int) -> bool:
        return any(mask & ~basis == 0 for basis in self.bases)

    def satisfies_exchange(self) -> bool:
        for first in self.bases:
            for second in self.bases:
                for x in self.labels_index(first & ~second):
                    reduced = first & ~(1 << x)
                    if not any(reduced | (1 << y) in self.bases for y in self.labels_index(second & ~first)):
                        return False
        return True


def uniform_matroid(rank: int, size: int, ground: Optional[Sequence[str]] = None) -> Matroid:
    labels = tuple(ground) if ground is not None else tuple(str(i) for i in range(1, size + 1))
    return Matroid.from_bases(labels, itertools.combinations(labels, rank), check=False)


def free_matroid(ground: Sequence[str]) -> Matroid:
    return Matroid.from_bases(ground, [ground], check=False)


def matroid_from_subspace(V: Subspace, limit: int = DEFAULT_ENUMERATION_LIMIT) -> Matroid:
    """
    M(V): bases are the d-subsets B whose columns in the basis matrix are invertible.

    Raises:
        EnumerationTooLargeError: If C(|E|, dim V) exceeds the limit
    """
    size, d = len(V.ground), V.dim
    candidates = comb(size, d)
    if candidates > limit:
        raise EnumerationTooLargeError(f"C({size},{d}) = {candidates} exceeds the enumeration limit {limit}")
    bases = [subset for subset in itertools.combinations(V.ground, d) if V.columns_rank(subset) == d]
    return Matroid.from_bases(V.ground, bases, check=False)


def matroid_dual(M: Matroid) -> Matroid:
    full = (1 << len(M.ground)) - 1
    return Matroid(M.ground, len(M.ground) - M.rank, frozenset(full & ~basis for basis in M.bases))


def matroid_direct_sum(M1: Matroid, M2: Matroid) -> Matroid:
    """
    Raises:
        GroundSetError: If the ground sets share a label (relabel first)
    """
    shared = set(M1.ground) & set(M2.ground)
    if shared:
        raise GroundSetError(f"direct sum needs disjoint ground sets, shared: {sorted(shared)}")
    shift = len(M1.ground)
    bases = frozenset(first | (second << shift) for first in M1.bases for second in M2.bases)
    return Matroid(M1.ground + M2.ground, M1.rank + M2.rank, bases)


def relabel_matroid(M: Matroid, prefix: str) -> Matroid:
    return Matroid(tuple(f"{prefix}{label}" for label in M.ground), M.rank, M.bases)


def _project(mask: int, keep: List[int]) -> int:
    projected = 0
    for new_index, old_index in enumerate(keep):
        if mask >> old_index & 1:
            projected |= 1 << new_index
    return projected


def matroid_minor(M: Matroid, delete: Iterable[str] = (), contract: Iterable[str] = ()) -> Matroid:
    """
    M / contract minus delete, computed on the basis family.

    Raises:
        GroundSetError: If the sets overlap or leave the ground set
    """
    delete_set = {str(label) for label in delete}
    contract_set = {str(label) for label in contract}
    if delete_set & contract_set:
        raise GroundSetError(f"delete and contract overlap: {sorted(delete_set & contract_set)}")
    delete_mask = M.mask_of(delete_set)
    contract_mask = M.mask_of(contract_set)

    contract_rank = max(bin(basis & contract_mask).count("1") for basis in M.bases)
    contracted = {basis & ~contract_mask for basis in M.bases if bin(basis & contract_mask).count("1") == contract_rank}
    smallest_overlap = min(bin(basis & delete_mask).count("1") for basis in contracted)
    deleted = {basis & ~delete_mask for basis in contracted if bin(basis & delete_mask).count("1") == smallest_overlap}

    keep = [index for index in range(len(M.ground)) if not (delete_mask | contract_mask) >> index & 1]
    bases = frozenset(_project(basis, keep) for basis in deleted)
    rank = bin(next(iter(bases))).count("1")
    return Matroid(tuple(M.ground[index] for index in keep), rank, bases)


def restriction(M: Matroid, labels: Iterable[str]) -> Matroid:
    keep = {str(label) for label in labels}
    return matroid_minor(M, delete=[label for label in M.ground if label not in keep])


def circuits(M: Matroid, limit: int = DEFAULT_ENUMERATION_LIMIT) -> List[List[str]]:
    """
    Minimal dependent sets, ordered by size and then by ground order.

    Raises:
        EnumerationTooLargeError: If 2^|E| exceeds the limit
    """
    size = len(M.ground)
    if 2 ** size > limit:
        raise EnumerationTooLargeError(f"2^{size} subsets exceed the enumeration limit {limit}")
    found: List[int] = []
    for subset_size in range(1, min(M.rank + 1, size) + 1):
        for indices in itertools.combinations(range(size), subset_size):
            mask = sum(1 << index for index in indices)
            if M._independent_mask(mask):
                continue
            if all(M._independent_mask(mask & ~(1 << index)) for index in indices):
                found.append(mask)
    return [M.labels_of(mask) for mask in found]


def is_circuit(V: Subspace, C: Sequence[str]) -> bool:
    """Circuit test on the columns of V indexed by C, without enumerating the matroid."""
    labels = [str(label) for label in C]
    if not labels or len(set(labels)) != len(labels):
        return False
    if V.columns_rank(labels) != len(labels) - 1:
        return False
    return all(V.columns_rank(labels[:i] + labels[i + 1:]) == len(labels) - 1 for i in range(len(labels)))


def circuit_sets(found: Iterable[Iterable[str]]) -> Set[FrozenSet[str]]:
    return {frozenset(circuit) for circuit in found}
