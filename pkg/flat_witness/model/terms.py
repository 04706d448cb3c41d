"""
Terms, equations and quasi-equations in bracket-free prefix notation.

Tokens are separated by whitespace: ``*`` is the product, ``inv`` the
inverse, ``1`` the unit and ``&`` the meet; any other identifier is a
variable. The length of an equation is the number of symbols of both sides,
so ``* x * y inv y = x`` has length 7; the ``=`` is not counted.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Sequence, Tuple, Union

logger = logging.getLogger(__name__)

PRODUCT = "*"
INVERSE = "inv"
UNIT = "1"
MEET = "&"


class TermSyntaxError(ValueError):
    """Raised when prefix text does not parse as a term over the signature."""
    pass


class ArityMismatchError(TermSyntaxError):
    """Raised when an operation symbol runs out of arguments."""
    pass


class UnknownSymbolError(TermSyntaxError):
    """Raised when a token is neither a variable nor an operation of the signature."""
    pass


class TrailingTokensError(TermSyntaxError):
    """Raised when tokens remain after a complete term."""
    pass


@dataclass(frozen=True)
class Signature:
    name: str
    operations: Tuple[Tuple[str, int], ...]

    def __post_init__(self):
        symbols = [s for s, _ in self.operations]
        if len(set(symbols)) != len(symbols):
            raise ValueError(f"Signature {self.name} repeats a symbol")

    @property
    def symbols(self) -> List[str]:
        return [s for s, _ in self.operations]

    def arity(self, symbol: str) -> int:
        for s, k in self.operations:
            if s == symbol:
                return k
        raise KeyError(symbol)

    def __contains__(self, symbol: str) -> bool:
        return any(s == symbol for s, _ in self.operations)


GROUP = Signature("group", ((PRODUCT, 2), (INVERSE, 1), (UNIT, 0)))
MONOID = Signature("monoid", ((PRODUCT, 2), (UNIT, 0)))
INVERSE_SEMIGROUP = Signature("inverse", ((PRODUCT, 2), (INVERSE, 1)))
SEMIGROUP = Signature("semigroup", ((PRODUCT, 2),))
FLAT = Signature("flat", ((PRODUCT, 2), (INVERSE, 1), (MEET, 2)))
FLAT_UNIT = Signature("flat-unit", ((PRODUCT, 2), (INVERSE, 1), (UNIT, 0), (MEET, 2)))
SEMIRING = Signature("semiring", ((PRODUCT, 2), (MEET, 2)))

SIGNATURES: Dict[str, Signature] = {
    s.name: s for s in (GROUP, MONOID, INVERSE_SEMIGROUP, SEMIGROUP, FLAT, FLAT_UNIT, SEMIRING)
}
RESERVED = {PRODUCT, INVERSE, UNIT, MEET, "=", ",", "->"}


def signature_named(name: str) -> Signature:
    try:
        return SIGNATURES[name]
    except KeyError as e:
        raise KeyError(f"Unknown signature '{name}', expected one of {sorted(SIGNATURES)}") from e


def signature_for_symbols(symbols: Iterable[str]) -> Signature:
    """The preset whose symbol set is exactly `symbols`."""
    wanted = set(symbols)
    for signature in SIGNATURES.values():
        if set(signature.symbols) == wanted:
            return signature
    raise KeyError(f"No signature preset with symbols {sorted(wanted)}")


@dataclass(frozen=True)
class Var:
    name: str

    @property
    def size(self) -> int:
        return 1

    def tokens(self) -> List[str]:
        return [self.name]

    def variables(self) -> List[str]:
        return [self.name]

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Op:
    symbol: str
    args: Tuple["Term", ...] = ()

    @property
    def size(self) -> int:
        return 1 + sum(a.size for a in self.args)

    def tokens(self) -> List[str]:
        out = [self.symbol]
        for a in self.args:
            out.extend(a.tokens())
        return out

    def variables(self) -> List[str]:
        seen: Dict[str, None] = {}
        for a in self.args:
            for v in a.variables():
                seen.setdefault(v, None)
        return list(seen)

    def __str__(self) -> str:
        return format_term(self)


Term = Union[Var, Op]
ONE = Op(UNIT)


def format_term(term: Term) -> str:
    return " ".join(term.tokens())


def _parse_at(tokens: Sequence[str], pos: int, signature: Signature) -> Tuple[Term, int]:
    if pos >= len(tokens):
        raise ArityMismatchError("Unexpected end of input: an operation is missing arguments")
    token = tokens[pos]
    if token in signature:
        args = []
        pos += 1
        for _ in range(signature.arity(token)):
            arg, pos = _parse_at(tokens, pos, signature)
            args.append(arg)
        return Op(token, tuple(args)), pos
    if token in RESERVED or not token.isidentifier():
        raise UnknownSymbolError(f"Symbol '{token}' is not in signature {signature.name}")
    return Var(token), pos + 1


def parse_term(text: str, signature: Signature = GROUP) -> Term:
    tokens = text.split()
    if not tokens:
        raise ArityMismatchError("Empty term")
    term, pos = _parse_at(tokens, 0, signature)
    if pos != len(tokens):
        raise TrailingTokensError(f"Trailing tokens after term: {' '.join(tokens[pos:])}")
    return term


@dataclass(frozen=True)
class Equation:
    lhs: Term
    rhs: Term

    @property
    def length(self) -> int:
        return self.lhs.size + self.rhs.size

    def variables(self) -> List[str]:
        return _ordered_variables([self.lhs, self.rhs])

    def format(self) -> str:
        return f"{format_term(self.lhs)} = {format_term(self.rhs)}"

    def __str__(self) -> str:
        return self.format()


@dataclass(frozen=True)
class QuasiEquation:
    premises: Tuple[Equation, ...]
    conclusion: Equation

    @property
    def length(self) -> int:
        return sum(p.length for p in self.premises) + self.conclusion.length

    def variables(self) -> List[str]:
        terms: List[Term] = []
        for eq in self.premises + (self.conclusion,):
            terms.extend((eq.lhs, eq.rhs))
        return _ordered_variables(terms)

    def format(self) -> str:
        head = " , ".join(p.format() for p in self.premises)
        return f"{head} -> {self.conclusion.format()}" if head else f"-> {self.conclusion.format()}"

    def __str__(self) -> str:
        return self.format()


def _ordered_variables(terms: Iterable[Term]) -> List[str]:
    seen: Dict[str, None] = {}
    for t in terms:
        for v in t.variables():
            seen.setdefault(v, None)
    return list(seen)


def _split_tokens(tokens: List[str], separator: str) -> List[List[str]]:
    parts: List[List[str]] = [[]]
    for token in tokens:
        if token == separator:
            parts.append([])
        else:
            parts[-1].append(token)
    return parts


def _equation_from_tokens(tokens: List[str], signature: Signature) -> Equation:
    sides = _split_tokens(tokens, "=")
    if len(sides) != 2:
        raise TermSyntaxError(f"Equation needs exactly one '=': {' '.join(tokens)}")
    return Equation(parse_term(" ".join(sides[0]), signature), parse_term(" ".join(sides[1]), signature))


def parse_equation(text: str, signature: Signature = GROUP) -> Equation:
    """Parse ``LHS = RHS``."""
    return _equation_from_tokens(text.split(), signature)


def parse_quasi_equation(text: str, signature: Signature = GROUP) -> QuasiEquation:
    """Parse ``p1 = q1 , p2 = q2 -> l = r``; without ``->`` the text is a bare conclusion."""
    parts = _split_tokens(text.split(), "->")
    if len(parts) > 2:
        raise TermSyntaxError("Quasi-equation has more than one '->'")
    if len(parts) == 1:
        return QuasiEquation((), _equation_from_tokens(parts[0], signature))
    premise_tokens, conclusion_tokens = parts
    premises = tuple(
        _equation_from_tokens(chunk, signature)
        for chunk in _split_tokens(premise_tokens, ",") if chunk
    ) if premise_tokens else ()
    return QuasiEquation(premises, _equation_from_tokens(conclusion_tokens, signature))


def prefix_length(statement: Union[Equation, QuasiEquation]) -> int:
    """Symbol count of every term, premises and conclusion together."""
    return statement.length


def product(terms: Sequence[Term]) -> Term:
    """Left-associated product ((t1 t2) t3) ...; a single term is returned unchanged."""
    if not terms:
        raise ValueError("Product of no terms")
    result = terms[0]
    for t in terms[1:]:
        result = Op(PRODUCT, (result, t))
    return result


def power(term: Term, exponent: int) -> Term:
    """term^exponent as exponent-1 left-associated multiplications."""
    if exponent < 1:
        raise ValueError(f"Exponent must be positive, got {exponent}")
    return product([term] * exponent)


def meet(left: Term, right: Term) -> Term:
    return Op(MEET, (left, right))


def inverse(term: Term) -> Term:
    return Op(INVERSE, (term,))


def substitute(term: Term, mapping: Dict[str, Term]) -> Term:
    if isinstance(term, Var):
        return mapping.get(term.name, term)
    return Op(term.symbol, tuple(substitute(a, mapping) for a in term.args))
