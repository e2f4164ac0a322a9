from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from concrete.nodes import Node, node_sort_key
from refinement import BOT, TOP, RefType, TypeLattice, depth, is_safe


@dataclass
class TypeMap:
    """Sparse map from abstract nodes to refinement types; missing nodes are ⊥."""

    types: Dict[Node, RefType] = field(default_factory=dict)
    top: bool = False
    cause: Optional[str] = None
    cause_node: Optional[Node] = None

    def get(self, node: Node) -> RefType:
        if self.top:
            return TOP
        return self.types.get(node, BOT)

    def copy(self) -> "TypeMap":
        return TypeMap(dict(self.types), self.top, self.cause, self.cause_node)

    def nodes(self) -> List[Node]:
        return sorted(self.types, key=node_sort_key)

    def items(self) -> Iterator[Tuple[Node, RefType]]:
        for n in self.nodes():
            yield n, self.types[n]

    def is_safe(self) -> bool:
        return not self.top and all(is_safe(t) for t in self.types.values())

    def reached(self) -> int:
        return sum(1 for t in self.types.values() if t is not BOT)

    def max_depth(self) -> int:
        return max((depth(t) for t in self.types.values()), default=0)

    def leq(self, other: "TypeMap", lattice: TypeLattice) -> bool:
        if other.top:
            return True
        if self.top:
            return False
        return all(lattice.leq(t, other.get(n)) for n, t in self.types.items())
