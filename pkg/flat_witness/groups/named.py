"""
Named groups and group families for building test corpora.

Specs are strings such as ``cyclic:4``, ``quaternion`` or
``product:(quaternion,cyclic:3)``. Permutation groups are generated with
sympy and converted to tables at ingestion; everything else is built directly
from its product rule.
"""
import logging
import math
import re
from typing import Callable, List, Sequence, Tuple

import numpy as np
from sympy.combinatorics.named_groups import AlternatingGroup, SymmetricGroup

from flat_witness.config import DEFAULT_MAX_GROUP_ORDER
from flat_witness.groups.core import FiniteGroup, direct_product, from_table

logger = logging.getLogger(__name__)


class UnknownSpecError(ValueError):
    """Raised when a group or family spec cannot be parsed."""
    pass


class SizeLimitExceededError(ValueError):
    """Raised when a named group would exceed the configured order cap."""
    pass


_QUATERNION_UNITS = ["1", "i", "j", "k"]
# unit product table: (sign, unit) for e_a * e_b
_QUATERNION_RULES = {
    ("1", u): (1, u) for u in _QUATERNION_UNITS
}
_QUATERNION_RULES.update({(u, "1"): (1, u) for u in _QUATERNION_UNITS})
_QUATERNION_RULES.update({
    ("i", "i"): (-1, "1"), ("j", "j"): (-1, "1"), ("k", "k"): (-1, "1"),
    ("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
    ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j"),
})


def table_from_function(elements: Sequence, mul: Callable) -> np.ndarray:
    """Cayley table of a closed binary operation on a list of hashable elements."""
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    table = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i, j] = index[mul(a, b)]
    return table


def cyclic_group(n: int) -> FiniteGroup:
    idx = np.arange(n)
    return from_table(n, (idx[:, None] + idx[None, :]) % n, label=f"cyclic:{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of an n-gon, order 2n; element r^i s^j has index j*n + i."""
    elements = [(i, j) for j in range(2) for i in range(n)]

    def mul(a, b):
        (i1, j1), (i2, j2) = a, b
        # s r^i = r^-i s
        i = (i1 + (i2 if j1 == 0 else -i2)) % n
        return (i, (j1 + j2) % 2)

    return from_table(2 * n, table_from_function(elements, mul), label=f"dihedral:{n}")


def quaternion_group() -> FiniteGroup:
    elements = [(s, u) for s in (1, -1) for u in _QUATERNION_UNITS]

    def mul(a, b):
        sign, unit = _QUATERNION_RULES[(a[1], b[1])]
        return (a[0] * b[0] * sign, unit)

    return from_table(8, table_from_function(elements, mul), label="quaternion")


def _permutation_group(perms: List[Tuple[int, ...]], label: str) -> FiniteGroup:
    """Table of a permutation group; x*y applies x first, then y."""
    perms = sorted(perms)
    arr = np.array(perms, dtype=np.int64)
    n, degree = arr.shape
    radix = degree ** np.arange(degree - 1, -1, -1)
    codes = arr @ radix
    order = np.argsort(codes)
    sorted_codes = codes[order]
    table = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        composed = arr[:, arr[i]]  # row y: y[x[t]] = (x*y)[t]
        table[i] = order[np.searchsorted(sorted_codes, composed @ radix)]
    return from_table(n, table, label=label)


def symmetric_group(n: int) -> FiniteGroup:
    if n <= 1:
        return cyclic_group(1) if n == 1 else _bad(f"symmetric:{n}")
    perms = [tuple(p.array_form) for p in SymmetricGroup(n).generate()]
    return _permutation_group(perms, f"symmetric:{n}")


def alternating_group(n: int) -> FiniteGroup:
    if n <= 2:
        return cyclic_group(1) if n >= 1 else _bad(f"alternating:{n}")
    perms = [tuple(p.array_form) for p in AlternatingGroup(n).generate()]
    return _permutation_group(perms, f"alternating:{n}")


def _bad(spec: str):
    raise UnknownSpecError(f"Unknown group spec: {spec}")


def _split_top_level(text: str) -> List[str]:
    parts, depth, start = [], 0, 0
    for pos, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise UnknownSpecError(f"Unbalanced parentheses in '{text}'")
        elif ch == "," and depth == 0:
            parts.append(text[start:pos].strip())
            start = pos + 1
    if depth != 0:
        raise UnknownSpecError(f"Unbalanced parentheses in '{text}'")
    parts.append(text[start:].strip())
    return parts


def _parse_int(value: str, spec: str) -> int:
    if not re.fullmatch(r"\d+", value.strip()):
        raise UnknownSpecError(f"Expected a positive integer in '{spec}'")
    n = int(value)
    if n < 1:
        raise UnknownSpecError(f"Expected a positive integer in '{spec}'")
    return n


def spec_order(spec: str) -> int:
    """Order of the named group without building it."""
    spec = spec.strip()
    if spec == "quaternion":
        return 8
    if spec == "trivial":
        return 1
    kind, sep, arg = spec.partition(":")
    if not sep:
        _bad(spec)
    if kind == "product":
        arg = arg.strip()
        if not (arg.startswith("(") and arg.endswith(")")):
            _bad(spec)
        factors = _split_top_level(arg[1:-1])
        if len(factors) != 2:
            _bad(spec)
        return spec_order(factors[0]) * spec_order(factors[1])
    n = _parse_int(arg, spec)
    if kind == "cyclic":
        return n
    if kind == "dihedral":
        return 2 * n
    if kind == "symmetric":
        return math.factorial(n)
    if kind == "alternating":
        return max(1, math.factorial(n) // 2)
    _bad(spec)


def named_group(spec: str, max_order: int = DEFAULT_MAX_GROUP_ORDER) -> FiniteGroup:
    """
    Build a named group.

    Args:
        spec: one of cyclic:n, dihedral:n, symmetric:n, alternating:n,
            quaternion, trivial, product:(spec,spec).
        max_order: cap on the order of the table to build.

    Raises:
        UnknownSpecError: the spec is malformed.
        SizeLimitExceededError: the group is larger than max_order.
    """
    spec = spec.strip()
    order = spec_order(spec)
    if order > max_order:
        raise SizeLimitExceededError(f"Group '{spec}' has order {order} > cap {max_order}")

    if spec == "quaternion":
        return quaternion_group()
    if spec == "trivial":
        return cyclic_group(1)
    kind, _, arg = spec.partition(":")
    if kind == "product":
        left, right = _split_top_level(arg.strip()[1:-1])
        return direct_product(named_group(left, max_order), named_group(right, max_order), label=spec)
    n = int(arg)
    builders = {
        "cyclic": cyclic_group,
        "dihedral": dihedral_group,
        "symmetric": symmetric_group,
        "alternating": alternating_group,
    }
    group = builders[kind](n)
    logger.debug(f"Built named group {spec} of order {group.order}")
    return group


def named_family(spec: str, max_order: int = DEFAULT_MAX_GROUP_ORDER) -> List[FiniteGroup]:
    """
    Expand a family spec into groups sorted by order.

    Supported forms:
        cyclic2powers:a..b   cyclic groups of order 2^k with a <= 2^k <= b
        dihedral:a..b        dihedral:n for a <= n <= b
        spec;spec;...        an explicit list of group specs
    """
    spec = spec.strip()
    match = re.fullmatch(r"(cyclic2powers|dihedral):(\d+)\.\.(\d+)", spec)
    if match:
        kind, low, high = match.group(1), int(match.group(2)), int(match.group(3))
        if kind == "cyclic2powers":
            specs = [f"cyclic:{2 ** k}" for k in range(0, high.bit_length() + 1) if low <= 2 ** k <= high]
        else:
            specs = [f"dihedral:{n}" for n in range(low, high + 1)]
    elif ";" in spec or ":" in spec or spec in ("quaternion", "trivial"):
        specs = [s for s in spec.split(";") if s.strip()]
    else:
        raise UnknownSpecError(f"Unknown family spec: {spec}")
    groups = [named_group(s, max_order) for s in specs]
    return sorted(groups, key=lambda g: g.order)
