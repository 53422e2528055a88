"""A complete verification problem: graded cohomology, special pair,
cobordism map, grading-convention flag, and optional chain-level data.

Instances are always stored internally in the cohomology convention;
``convention`` records how the source document was graded so reports can
show the user's numbers.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Any, Mapping

from .errors import ValidationError
from .froyshov import ChainSpecial, SpecialPair
from .graded import CochainComplex, GradedMap, GradedSpace

HOMOLOGY = "homology"
COHOMOLOGY = "cohomology"
LEVEL_COHOMOLOGY = "cohomology-level"
LEVEL_CHAIN = "chain-level"


@dataclass(frozen=True)
class Instance:
    space: GradedSpace
    pair: SpecialPair
    w: GradedMap
    w_label: str = "W"
    convention: str = COHOMOLOGY
    level: str = LEVEL_COHOMOLOGY
    complex: CochainComplex | None = None
    chain_special: ChainSpecial | None = None
    chain_w: GradedMap | None = None
    metadata: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.convention not in (HOMOLOGY, COHOMOLOGY):
            raise ValidationError(f"unknown convention {self.convention!r}")
        if self.level not in (LEVEL_COHOMOLOGY, LEVEL_CHAIN):
            raise ValidationError(f"unknown level {self.level!r}")
        if self.w.shift != 0 or self.w.source != self.space or self.w.target != self.space:
            raise ValidationError("cobordism map must be a degree-preserving endomap")
        self.pair.validate_against(self.space)
        if self.level == LEVEL_CHAIN and (
            self.complex is None or self.chain_special is None or self.chain_w is None
        ):
            raise ValidationError(
                "chain-level instance needs its complex, special data and chain map"
            )

    def with_w(self, w: GradedMap, label: str, chain_w: GradedMap | None = None) -> "Instance":
        return replace(self, w=w, w_label=label, chain_w=chain_w)

    @property
    def name(self) -> str:
        return str(self.metadata.get("name", "unnamed"))
