"""
Smooth complete fans and their Stanley-Reisner data
"""

from dataclasses import dataclass, field
from itertools import combinations
from typing import FrozenSet, List, Set, Tuple

Ray = Tuple[int, ...]
Cone = FrozenSet[int]


@dataclass
class Fan:
    """Rays are integer vectors; cones are sets of 0-based ray indices"""

    rank: int
    rays: List[Ray]
    cones: List[Cone]
    complete: bool = True
    name: str = ""

    @property
    def m(self) -> int:
        return len(self.rays)

    def faces(self) -> Set[Cone]:
        found: Set[Cone] = {frozenset()}
        for cone in self.cones:
            for k in range(1, len(cone) + 1):
                found.update(frozenset(c) for c in combinations(sorted(cone), k))
        return found

    def face_counts(self) -> List[int]:
        """f-vector shifted by one: entry k counts faces with k rays"""
        counts = [0] * (self.rank + 1)
        for face in self.faces():
            counts[len(face)] += 1
        return counts

    def permuted(self, order: List[int]) -> "Fan":
        """Fan with rays listed as ``[rays[j] for j in order]``"""
        new_index = {old: new for new, old in enumerate(order)}
        return Fan(
            self.rank,
            [self.rays[j] for j in order],
            [frozenset(new_index[i] for i in cone) for cone in self.cones],
            self.complete,
            self.name,
        )


@dataclass
class StanleyReisnerData:
    """Minimal non-faces of a fan, as sorted tuples of 0-based ray indices"""

    nonfaces: List[Tuple[int, ...]] = field(default_factory=list)

    def labels(self) -> List[List[int]]:
        return [[i + 1 for i in face] for face in self.nonfaces]
