"""Dense log-domain factors.

A factor is a table over an ordered scope of discrete variables.  The table is
stored as a numpy array whose axes follow the scope order, so the flattened
(C-order) table is row-major with the last scope variable varying fastest.
All entries are natural logs; zero probability is ``-inf``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.special import logsumexp

__all__ = [
    "Factor",
    "ScopeError",
    "multiply",
    "product",
    "max_out",
    "sum_out",
    "eliminate",
    "condition",
]


class ScopeError(ValueError):
    """Raised when factor scopes are incompatible with an operation."""


@dataclass(frozen=True, eq=False)
class Factor:
    scope: tuple[int, ...]
    table: np.ndarray

    def __post_init__(self):
        scope = tuple(int(v) for v in self.scope)
        table = np.asarray(self.table, dtype=float)
        if len(set(scope)) != len(scope):
            raise ScopeError(f"repeated variable in scope {scope}")
        if table.ndim != len(scope):
            raise ScopeError(
                f"table has {table.ndim} axes but scope has {len(scope)} variables"
            )
        if np.any(np.isnan(table)) or np.any(table == np.inf):
            raise ValueError("factor entries must be finite or -inf")
        table.setflags(write=False)
        object.__setattr__(self, "scope", scope)
        object.__setattr__(self, "table", table)

    @classmethod
    def from_values(
        cls, scope: Sequence[int], cards: Sequence[int], values: Iterable[float]
    ) -> "Factor":
        """Build a factor from linear-domain values listed row-major."""
        values = np.asarray(list(values), dtype=float).reshape(tuple(cards))
        with np.errstate(divide="ignore"):
            return cls(tuple(scope), np.log(values))

    @classmethod
    def scalar(cls, log_value: float) -> "Factor":
        return cls((), np.array(float(log_value)))

    @classmethod
    def unit(cls, scope: Sequence[int], cards: Sequence[int]) -> "Factor":
        """The multiplicative identity over ``scope`` (all entries log 1)."""
        return cls(tuple(scope), np.zeros(tuple(cards)))

    @property
    def cards(self) -> tuple[int, ...]:
        return self.table.shape

    @property
    def size(self) -> int:
        return self.table.size

    def card(self, var: int) -> int:
        return self.table.shape[self.scope.index(var)]

    def values(self) -> np.ndarray:
        """Linear-domain table."""
        return np.exp(self.table)

    def flat(self) -> np.ndarray:
        return self.table.reshape(-1)

    @property
    def value(self) -> float:
        if self.scope:
            raise ScopeError("factor is not a scalar")
        return float(self.table)

    def rename(self, mapping: Mapping[int, int]) -> "Factor":
        return Factor(tuple(mapping.get(v, v) for v in self.scope), self.table)

    def aligned(self, scope: Sequence[int]) -> np.ndarray:
        """This table with axes permuted to follow ``scope`` (same variables)."""
        if set(scope) != set(self.scope) or len(scope) != len(self.scope):
            raise ScopeError(f"{tuple(scope)} is not a permutation of {self.scope}")
        return np.transpose(self.table, [self.scope.index(v) for v in scope])

    def __repr__(self):
        return f"Factor(scope={self.scope}, cards={self.cards})"


def _broadcast(f: Factor, scope: Sequence[int], cards: Sequence[int]) -> np.ndarray:
    # permute f's axes into scope order, then pad the missing ones with size 1
    present = [v for v in scope if v in f.scope]
    table = np.transpose(f.table, [f.scope.index(v) for v in present])
    shape = [cards[k] if v in f.scope else 1 for k, v in enumerate(scope)]
    return table.reshape(shape)


def multiply(f: Factor, g: Factor) -> Factor:
    """Pointwise product (log-sum) over the union scope.

    The result lists ``f``'s variables first, then ``g``'s new ones in ``g``'s order.
    """
    for v in set(f.scope) & set(g.scope):
        if f.card(v) != g.card(v):
            raise ScopeError(
                f"variable {v} has cardinality {f.card(v)} in one factor and {g.card(v)} in the other"
            )
    scope = f.scope + tuple(v for v in g.scope if v not in f.scope)
    cards = f.cards + tuple(g.card(v) for v in scope[len(f.scope):])
    table = _broadcast(f, scope, cards) + _broadcast(g, scope, cards)
    return Factor(scope, np.broadcast_to(table, cards).copy())


def product(factors: Iterable[Factor]) -> Factor:
    result = Factor.scalar(0.0)
    for f in factors:
        result = multiply(result, f)
    return result


def _axis(f: Factor, var: int) -> int:
    try:
        return f.scope.index(var)
    except ValueError:
        raise ScopeError(f"variable {var} not in scope {f.scope}") from None


def max_out(f: Factor, var: int, return_argmax: bool = False):
    """Maximize ``var`` out of ``f``.

    With ``return_argmax`` also returns an integer array over the remaining
    scope holding the maximizing value of ``var``; ties go to the lowest index.
    """
    axis = _axis(f, var)
    scope = f.scope[:axis] + f.scope[axis + 1:]
    out = Factor(scope, f.table.max(axis=axis))
    if return_argmax:
        return out, f.table.argmax(axis=axis)
    return out


def sum_out(f: Factor, var: int) -> Factor:
    axis = _axis(f, var)
    scope = f.scope[:axis] + f.scope[axis + 1:]
    return Factor(scope, logsumexp(f.table, axis=axis))


def eliminate(f: Factor, var: int, op: str = "max") -> Factor:
    if op == "max":
        return max_out(f, var)
    if op == "sum":
        return sum_out(f, var)
    raise ValueError(f"unknown operator {op!r}")


def condition(f: Factor, evidence: Mapping[int, int]) -> Factor:
    """Slice ``f`` at the evidence values; unrelated evidence is ignored."""
    if not any(v in evidence for v in f.scope):
        return f
    index = tuple(evidence[v] if v in evidence else slice(None) for v in f.scope)
    scope = tuple(v for v in f.scope if v not in evidence)
    return Factor(scope, f.table[index])
