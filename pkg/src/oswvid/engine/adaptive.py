"""Operator scores, weights and roulette-wheel selection."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable

from ..operators import FAMILIES, VARIANTS, OperatorId

DEFAULT_SIGMA = (30.0, 20.0, 10.0, 0.0)


@dataclass
class AdaptiveLayer:
    lam: float = 0.5
    sigma: tuple[float, float, float, float] = DEFAULT_SIGMA
    families: tuple[str, ...] = FAMILIES
    weights: dict[OperatorId, float] = field(default_factory=dict)
    scores: dict[OperatorId, float] = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.lam <= 1.0:
            raise ValueError(f"reaction factor must lie in [0, 1], got {self.lam}")
        for fam in self.families:
            for v in VARIANTS:
                op = OperatorId(fam, v)
                self.weights.setdefault(op, 1.0)
                self.scores.setdefault(op, 0.0)

    def members(self, family: str) -> list[OperatorId]:
        return [op for op in self.weights if op.family == family]

    def family_weight(self, family: str) -> float:
        return sum(w for op, w in self.weights.items() if op.family == family)

    def rates(self, family: str) -> dict[OperatorId, float]:
        ops = self.members(family)
        total = sum(self.weights[op] for op in ops)
        return {op: self.weights[op] / total for op in ops}

    def select(self, family: str, rng: random.Random) -> OperatorId:
        """Roulette wheel over the family's weights; zero-weight operators are never drawn."""
        ops = [op for op in self.members(family) if self.weights[op] > 0]
        if not ops:
            raise ValueError(f"no live operator in family {family}")
        total = sum(self.weights[op] for op in ops)
        x = rng.random() * total
        acc = 0.0
        for op in ops:
            acc += self.weights[op]
            if x < acc:
                return op
        return ops[-1]

    def reward(self, ops: Iterable[OperatorId], value: float) -> None:
        for op in ops:
            self.scores[op] += value

    def update_weights(self) -> None:
        """Blend each weight towards its family's score share, then reset scores.

        Families that earned no score keep their weights.
        """
        lam = self.lam
        for fam in self.families:
            ops = self.members(fam)
            total = sum(self.scores[op] for op in ops)
            if total > 0:
                for op in ops:
                    self.weights[op] = (1.0 - lam) * self.weights[op] + lam * self.scores[op] / total
        for op in self.scores:
            self.scores[op] = 0.0

    def snapshot(self) -> dict[OperatorId, float]:
        return dict(self.weights)


def score_class(sigma: tuple[float, float, float, float], dominates_all: bool, dominates_any: bool, dominated: bool) -> float:
    if dominated:
        return sigma[3]
    if dominates_all:
        return sigma[0]
    if dominates_any:
        return sigma[1]
    return sigma[2]
