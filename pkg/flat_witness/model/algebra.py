"""
Finite algebras given by operation tables, and brute-force satisfaction.

Assignments are enumerated as flat indices into the grid size^k and decoded
block by block with numpy, so a whole block of assignments is evaluated with
a handful of table lookups. The first failing assignment in lexicographic
order (first variable most significant) is reported.
"""
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from flat_witness.config import (
    BudgetExceededError,
    DEFAULT_ASSIGNMENT_BUDGET,
    DEFAULT_HOM_NODE_BUDGET,
)
from flat_witness.groups.core import FiniteGroup
from flat_witness.model.terms import (
    GROUP,
    INVERSE,
    PRODUCT,
    UNIT,
    Equation,
    QuasiEquation,
    Signature,
    Term,
    Var,
    signature_for_symbols,
    signature_named,
)

logger = logging.getLogger(__name__)

_BLOCK = 1 << 16


class AlgebraTableError(ValueError):
    """Raised when operation tables do not match the signature or the universe."""
    pass


class SignatureMismatchError(ValueError):
    """Raised when a term uses an operation the algebra does not interpret."""
    pass


@dataclass(frozen=True, eq=False)
class FiniteAlgebra:
    """
    Universe {0..size-1} with one table per operation symbol.

    Constants are 0-d arrays, unary operations vectors and binary operations
    size x size arrays.
    """
    size: int
    signature: Signature
    operations: Dict[str, np.ndarray]
    label: str = ""

    def __post_init__(self):
        if self.size < 1:
            raise AlgebraTableError(f"Universe size must be positive, got {self.size}")
        for symbol, arity in self.signature.operations:
            if symbol not in self.operations:
                raise AlgebraTableError(f"Missing table for '{symbol}'")
            table = self.operations[symbol]
            if table.shape != (self.size,) * arity:
                raise AlgebraTableError(f"Table for '{symbol}' has shape {table.shape}, expected {(self.size,) * arity}")
            if table.size and (table.min() < 0 or table.max() >= self.size):
                raise AlgebraTableError(f"Table for '{symbol}' leaves the universe")
        extra = set(self.operations) - set(self.signature.symbols)
        if extra:
            raise AlgebraTableError(f"Tables for symbols outside the signature: {sorted(extra)}")

    @property
    def elements(self) -> range:
        return range(self.size)

    def op(self, symbol: str) -> np.ndarray:
        return self.operations[symbol]

    def to_json(self) -> Dict:
        ops = {s: (int(t) if t.ndim == 0 else t.tolist()) for s, t in self.operations.items()}
        return {"label": self.label, "signature": self.signature.name, "size": self.size, "ops": ops}

    def __repr__(self) -> str:
        return f"FiniteAlgebra(label={self.label!r}, size={self.size}, signature={self.signature.name})"


def make_algebra(size: int, signature: Signature, operations: Dict[str, object], label: str = "") -> FiniteAlgebra:
    tables = {}
    for symbol, table in operations.items():
        array = np.array(table, dtype=np.int64, order="C")
        array.setflags(write=False)
        tables[symbol] = array
    return FiniteAlgebra(size, signature, tables, label)


def algebra_from_json(data: Dict) -> FiniteAlgebra:
    if "ops" not in data or "size" not in data:
        raise AlgebraTableError("Algebra JSON needs 'size' and 'ops' keys")
    ops = data["ops"]
    if "signature" in data:
        signature = signature_named(data["signature"])
    else:
        signature = signature_for_symbols(ops)
    return make_algebra(int(data["size"]), signature, ops, label=data.get("label", ""))


def load_algebra(path: Union[str, Path]) -> FiniteAlgebra:
    with open(path, "r", encoding="utf-8") as f:
        return algebra_from_json(json.load(f))


def dump_algebra(algebra: FiniteAlgebra, path: Union[str, Path]) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(algebra.to_json(), f)


def group_algebra(group: FiniteGroup, signature: Signature = GROUP) -> FiniteAlgebra:
    """A group read as an algebra in (a sub-signature of) {*, inv, 1}."""
    available = {PRODUCT: group.table, INVERSE: group.inverse, UNIT: np.int64(group.identity)}
    ops = {}
    for symbol in signature.symbols:
        if symbol not in available:
            raise SignatureMismatchError(f"Groups do not interpret '{symbol}'")
        ops[symbol] = available[symbol]
    return make_algebra(group.order, signature, ops, label=group.label)


def evaluate(algebra: FiniteAlgebra, term: Term, env: Dict[str, np.ndarray]) -> np.ndarray:
    """Value of a term for every assignment in a block (env maps variables to value arrays)."""
    if isinstance(term, Var):
        return env[term.name]
    try:
        table = algebra.operations[term.symbol]
    except KeyError as e:
        raise SignatureMismatchError(f"{algebra.label or 'algebra'} has no operation '{term.symbol}'") from e
    if not term.args:
        return table
    args = tuple(evaluate(algebra, a, env) for a in term.args)
    return table[args]


def evaluate_at(algebra: FiniteAlgebra, term: Term, assignment: Dict[str, int]) -> int:
    env = {v: np.int64(x) for v, x in assignment.items()}
    return int(evaluate(algebra, term, env))


@dataclass(frozen=True)
class Satisfaction:
    """Holds, or fails with the first falsifying assignment."""
    holds: bool
    assignment: Optional[Dict[str, int]] = None

    def __bool__(self) -> bool:
        return self.holds


def _assignment_blocks(size: int, variables: Sequence[str], budget: int):
    k = len(variables)
    total = size ** k
    if total > budget:
        raise BudgetExceededError(f"{total} assignments of {k} variables exceed the budget of {budget}")
    if k == 0:
        yield 0, {}
        return
    shape = (size,) * k
    for start in range(0, total, _BLOCK):
        idx = np.arange(start, min(start + _BLOCK, total), dtype=np.int64)
        coords = np.unravel_index(idx, shape)
        yield start, dict(zip(variables, coords))


def _first_failure(algebra: FiniteAlgebra, variables: Sequence[str],
                   premises: Sequence[Equation], conclusion: Equation, budget: int) -> Satisfaction:
    for _, env in _assignment_blocks(algebra.size, variables, budget):
        ok = None
        for p in premises:
            hit = evaluate(algebra, p.lhs, env) == evaluate(algebra, p.rhs, env)
            ok = hit if ok is None else ok & hit
        bad = evaluate(algebra, conclusion.lhs, env) != evaluate(algebra, conclusion.rhs, env)
        if ok is not None:
            bad = bad & ok
        bad = np.broadcast_to(bad, np.shape(next(iter(env.values()))) if env else ())
        if bad.any():
            pos = int(np.argmax(bad)) if bad.ndim else 0
            return Satisfaction(False, {v: int(np.asarray(env[v]).reshape(-1)[pos]) for v in variables})
    return Satisfaction(True)


def satisfies_equation(algebra: FiniteAlgebra, equation: Equation,
                       budget: int = DEFAULT_ASSIGNMENT_BUDGET) -> Satisfaction:
    """
    Exhaustive check of an equation over all size^k assignments.

    Raises:
        BudgetExceededError: size^k is above the budget.
    """
    return _first_failure(algebra, equation.variables(), (), equation, budget)


def satisfies_quasiequation(algebra: FiniteAlgebra, quasi: QuasiEquation,
                            budget: int = DEFAULT_ASSIGNMENT_BUDGET) -> Satisfaction:
    """Exhaustive check: every assignment meeting all premises meets the conclusion."""
    return _first_failure(algebra, quasi.variables(), quasi.premises, quasi.conclusion, budget)


def satisfies(algebra: FiniteAlgebra, statement: Union[Equation, QuasiEquation],
              budget: int = DEFAULT_ASSIGNMENT_BUDGET) -> Satisfaction:
    if isinstance(statement, QuasiEquation):
        return satisfies_quasiequation(algebra, statement, budget)
    return satisfies_equation(algebra, statement, budget)


def is_homomorphism(source: FiniteAlgebra, target: FiniteAlgebra, mapping: np.ndarray) -> bool:
    for symbol, arity in source.signature.operations:
        s, t = source.operations[symbol], target.operations[symbol]
        if arity == 0:
            ok = mapping[s] == t
        elif arity == 1:
            ok = np.array_equal(mapping[s], t[mapping])
        else:
            ok = np.array_equal(mapping[s], t[mapping[:, None], mapping[None, :]])
        if not ok:
            return False
    return True


def _generating_set(algebra: FiniteAlgebra) -> List[int]:
    gens: List[int] = []
    current = subalgebra_generated(algebra, [])
    for x in algebra.elements:
        if len(current) == algebra.size:
            break
        if x not in current:
            gens.append(x)
            current = subalgebra_generated(algebra, gens)
    return gens


def subalgebra_generated(algebra: FiniteAlgebra, generators: Sequence[int]) -> frozenset:
    mask = np.zeros(algebra.size, dtype=bool)
    for symbol, arity in algebra.signature.operations:
        if arity == 0:
            mask[int(algebra.operations[symbol])] = True
    mask[list(generators)] = True
    while True:
        elems = np.flatnonzero(mask)
        grown = mask.copy()
        for symbol, arity in algebra.signature.operations:
            table = algebra.operations[symbol]
            if arity == 1:
                grown[table[elems]] = True
            elif arity == 2:
                grown[table[np.ix_(elems, elems)].ravel()] = True
        if grown.sum() == mask.sum():
            return frozenset(int(x) for x in elems)
        mask = grown


def _extend(source: FiniteAlgebra, target: FiniteAlgebra,
            gens: Sequence[int], images: Sequence[int]) -> Optional[np.ndarray]:
    """Extend generator images along the operations; None on the first conflict."""
    mapping = np.full(source.size, -1, dtype=np.int64)
    order: List[int] = []

    def assign(x: int, y: int) -> bool:
        if mapping[x] == -1:
            mapping[x] = y
            order.append(x)
            return True
        return mapping[x] == y

    for symbol, arity in source.signature.operations:
        if arity == 0 and not assign(int(source.operations[symbol]), int(target.operations[symbol])):
            return None
    for g, img in zip(gens, images):
        if not assign(g, img):
            return None
    head = 0
    while head < len(order):
        x = order[head]
        head += 1
        fx = int(mapping[x])
        for symbol, arity in source.signature.operations:
            s, t = source.operations[symbol], target.operations[symbol]
            if arity == 1:
                if not assign(int(s[x]), int(t[fx])):
                    return None
            elif arity == 2:
                for z in order[:head]:
                    fz = int(mapping[z])
                    if not assign(int(s[x, z]), int(t[fx, fz])) or not assign(int(s[z, x]), int(t[fz, fx])):
                        return None
    return mapping


def find_isomorphism(first: FiniteAlgebra, second: FiniteAlgebra,
                     node_budget: int = DEFAULT_HOM_NODE_BUDGET) -> Optional[np.ndarray]:
    """
    An isomorphism first -> second as an image array, or None.

    Backtracks over images of a greedy generating set of `first`, extending
    each partial choice to the subalgebra it generates.

    Raises:
        BudgetExceededError: more than node_budget generator images tried.
    """
    if first.size != second.size or set(first.signature.symbols) != set(second.signature.symbols):
        return None
    gens = _generating_set(first)
    nodes = 0

    def search(k: int, images: List[int]) -> Optional[np.ndarray]:
        nonlocal nodes
        mapping = _extend(first, second, gens[:k], images)
        if mapping is None:
            return None
        assigned = mapping[mapping >= 0]
        if np.unique(assigned).size != assigned.size:
            return None
        if k == len(gens):
            return mapping if is_homomorphism(first, second, mapping) else None
        for y in second.elements:
            nodes += 1
            if nodes > node_budget:
                raise BudgetExceededError(f"Isomorphism search exceeded {node_budget} nodes")
            found = search(k + 1, images + [y])
            if found is not None:
                return found
        return None

    return search(0, [])


def quotient_algebra(algebra: FiniteAlgebra, blocks: np.ndarray, label: str = "") -> FiniteAlgebra:
    """
    Quotient by a congruence given as canonical block ids.

    Block ids must be 0..k-1 numbered by least element; block b of the
    quotient is element b.
    """
    blocks = np.asarray(blocks, dtype=np.int64)
    k = int(blocks.max()) + 1
    reps = np.array([int(np.flatnonzero(blocks == b)[0]) for b in range(k)], dtype=np.int64)
    ops = {}
    for symbol, arity in algebra.signature.operations:
        table = algebra.operations[symbol]
        if arity == 0:
            ops[symbol] = blocks[int(table)]
        elif arity == 1:
            ops[symbol] = blocks[table[reps]]
        else:
            ops[symbol] = blocks[table[np.ix_(reps, reps)]]
    return make_algebra(k, algebra.signature, ops, label=label or f"{algebra.label}/{k}")
