"""
Command-line entry point.

Exit codes: 0 when the statement holds, the group is a member or the
presentation is verified; 1 when it fails, with the witness printed; 2 for
usage errors and exhausted budgets.
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from flat_witness.config import (
    DEFAULT_ALGEBRA_CAP,
    DEFAULT_ASSIGNMENT_BUDGET,
    DEFAULT_COSET_FACTOR,
    DEFAULT_EQUATION_LENGTH_CAP,
    DEFAULT_HOM_NODE_BUDGET,
    DEFAULT_MAX_GROUP_ORDER,
    BudgetExceededError,
    Config,
)
from flat_witness.flat.axioms import verify_nsoc_axioms, verify_semiring_axioms
from flat_witness.flat.extension import flat_extension
from flat_witness.flat.translation import EmptyPremiseUnpaddableError, semiring_form, translate_qe_to_eq
from flat_witness.groups.core import FiniteGroup, GroupTableError, exponent, load_group, group_from_json
from flat_witness.groups.named import SizeLimitExceededError, UnknownSpecError, named_family, named_group
from flat_witness.groups.series import composition_series, sylow_classification
from flat_witness.membership.growth import RatioBoundExceededError, growth_experiment, write_growth_csv
from flat_witness.membership.quasivariety import in_quasivariety
from flat_witness.membership.variety import (
    NotCliffordError,
    classify_clifford,
    complexity_prediction,
    in_variety_of_flat,
    shortest_failing_equation,
)
from flat_witness.membership.witness import (
    PreconditionViolatedError,
    VerificationFailedError,
    witness_equation_flat,
    witness_quasi_equation,
)
from flat_witness.model.algebra import (
    AlgebraTableError,
    FiniteAlgebra,
    SignatureMismatchError,
    algebra_from_json,
    dump_algebra,
    group_algebra,
    satisfies,
)
from flat_witness.model.terms import (
    FLAT,
    FLAT_UNIT,
    SEMIRING,
    TermSyntaxError,
    parse_equation,
    parse_quasi_equation,
    signature_named,
)
from flat_witness.presentation.lifting import PresentationNotVerifiedError, build_short_presentation
from flat_witness.presentation.presentation import (
    GeneratorMap,
    PresentationError,
    SignatureTag,
    dump_presentation,
    load_presentation,
    translate_generator_map,
    translate_signature,
)
from flat_witness.presentation.todd_coxeter import CosetEnumerationInconclusiveError, verify_presents
from flat_witness.presentation.words import WordSyntaxError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILS = 1
EXIT_USAGE = 2

_USAGE_ERRORS = (
    BudgetExceededError,
    UnknownSpecError,
    SizeLimitExceededError,
    GroupTableError,
    AlgebraTableError,
    SignatureMismatchError,
    TermSyntaxError,
    WordSyntaxError,
    PresentationError,
    EmptyPremiseUnpaddableError,
    CosetEnumerationInconclusiveError,
    PreconditionViolatedError,
    NotCliffordError,
    FileNotFoundError,
    KeyError,
    json.JSONDecodeError,
)

_TAGS = {
    "full": SignatureTag.FULL,
    "monoid": SignatureTag.MONOID,
    "inverse": SignatureTag.INVERSE,
    "semigroup": SignatureTag.SEMIGROUP,
}


class UsageError(Exception):
    """Raised when command-line arguments are inconsistent."""
    pass


def _emit(data) -> None:
    if isinstance(data, str):
        print(data)
    else:
        print(json.dumps(data, indent=2, sort_keys=True))


def _read_json(path: str) -> Dict:
    with open(path, "r", encoding="utf-8") as f:
        return json.load(f)


def _group(spec: str, config: Config) -> FiniteGroup:
    """A group from a JSON file path or a named spec such as cyclic:4."""
    if spec.endswith(".json"):
        path = Path(spec) if Path(spec).is_file() else config.corpus_dir / spec
        return load_group(path)
    return named_group(spec, config.max_group_order)


def _algebra(path: str) -> FiniteAlgebra:
    """An algebra file: either group JSON ("table") or algebra JSON ("ops")."""
    data = _read_json(path)
    if "ops" in data:
        return algebra_from_json(data)
    if "table" in data:
        return group_algebra(group_from_json(data))
    raise AlgebraTableError(f"{path} holds neither a group table nor algebra operations")


def _images(text: str) -> Dict[str, int]:
    images = {}
    for item in text.split(","):
        name, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"Generator image '{item}' is not of the form name=element")
        images[name.strip()] = int(value)
    return images


def _config(args: argparse.Namespace) -> Config:
    return Config(
        hom_nodes=args.budget_hom_nodes,
        assignments=args.budget_assignments,
        coset_factor=args.budget_coset_factor,
        max_group_order=args.budget_max_order,
        algebra_cap=args.budget_algebra_cap,
        equation_length_cap=args.budget_equation_length,
        corpus_dir=Path(args.corpus_dir),
        output_path=Path(args.out) if args.command == "growth" else Path("growth.csv"),
    )


def cmd_group(args: argparse.Namespace, config: Config) -> int:
    group = _group(args.group, config)
    series = composition_series(group)
    report = {
        "label": group.label,
        "order": group.order,
        "exponent": exponent(group),
        "abelian": group.is_abelian,
        "element_orders": [int(k) for k in group.element_orders],
        "composition_series": series.orders,
        "composition_factors": [f.order for f in series.factors],
    }
    if args.table:
        report["table"] = group.table.tolist()
    _emit(report)
    return EXIT_OK


def cmd_present(args: argparse.Namespace, config: Config) -> int:
    group = _group(args.group, config)
    built = build_short_presentation(group, allow_inverses=args.allow_inverses,
                                     coset_factor=config.coset_factor)
    presentation = built.presentation
    if args.signature != "full":
        presentation = translate_signature(presentation, _TAGS[args.signature])
    if args.out:
        dump_presentation(presentation, args.out)
    _emit(presentation.to_text().rstrip("\n"))
    if args.metrics:
        _emit(built.metrics.to_json())
    return EXIT_OK


def cmd_verify(args: argparse.Namespace, config: Config) -> int:
    group = _group(args.group, config)
    if args.presentation:
        if not args.images:
            raise UsageError("--images is required with --presentation")
        gmap = GeneratorMap(load_presentation(args.presentation), group, _images(args.images))
    else:
        built = build_short_presentation(group, verify=False, coset_factor=config.coset_factor)
        gmap = built.generator_map
        if args.signature != "full":
            gmap = translate_generator_map(gmap, _TAGS[args.signature])
    report = verify_presents(gmap, coset_factor=config.coset_factor)
    if report.ok:
        _emit(f"verified: {gmap.presentation} presents {group.label or 'the group'} "
              f"(order {group.order})")
        return EXIT_OK
    for line in report.diagnostics:
        _emit(f"not verified: {line}")
    return EXIT_FAILS


def cmd_check(args: argparse.Namespace, config: Config) -> int:
    if args.algebra:
        algebra = _algebra(args.algebra)
    elif args.group:
        algebra = group_algebra(_group(args.group, config))
    else:
        raise UsageError("check needs --algebra or --group")
    if args.equation:
        statement = parse_equation(args.equation, algebra.signature)
    elif args.quasi:
        statement = parse_quasi_equation(args.quasi, algebra.signature)
    else:
        raise UsageError("check needs --equation or --quasi")
    result = satisfies(algebra, statement, config.assignments)
    if result.holds:
        _emit(f"holds: {statement}")
        return EXIT_OK
    _emit(f"fails: {statement}")
    _emit({"assignment": result.assignment})
    return EXIT_FAILS


def cmd_membership(args: argparse.Namespace, config: Config) -> int:
    generator = _group(args.g, config)
    if args.algebra:
        verdict = in_variety_of_flat(_algebra(args.algebra), generator, config.algebra_cap, config.hom_nodes)
    elif args.h:
        member = _group(args.h, config)
        verdict = in_quasivariety(member, generator, config.hom_nodes)
        if not verdict.holds:
            _emit(verdict.to_json())
            witness = witness_quasi_equation(generator, member, node_budget=config.hom_nodes,
                                             coset_factor=config.coset_factor)
            _emit(witness.quasi_equation.format())
            return EXIT_FAILS
    else:
        raise UsageError("membership needs --h or --algebra")
    _emit(verdict.to_json())
    return EXIT_OK if verdict.holds else EXIT_FAILS


def cmd_witness(args: argparse.Namespace, config: Config) -> int:
    generator = _group(args.g, config)
    member = _group(args.h, config)
    if args.kind == "quasi":
        witness = witness_quasi_equation(generator, member, node_budget=config.hom_nodes,
                                         coset_factor=config.coset_factor)
        _emit(witness.quasi_equation.format())
        _emit({"element": witness.element, "word": witness.word.format(),
               "assignment": witness.assignment, "length": witness.quasi_equation.length})
        return EXIT_OK
    witness = witness_equation_flat(generator, member, signature_named(args.signature),
                                    node_budget=config.hom_nodes,
                                    assignment_budget=config.assignments,
                                    coset_factor=config.coset_factor)
    _emit(witness.equation.format())
    _emit({
        "exponent": witness.exponent,
        "signature": witness.signature.name,
        "length": witness.equation.length,
        "quasi_equation": witness.quasi.quasi_equation.format(),
        "falsifying_assignment": witness.falsifying_assignment,
        "holds_checked": witness.holds_checked,
    })
    return EXIT_OK


def cmd_flatten(args: argparse.Namespace, config: Config) -> int:
    group = _group(args.group, config)
    signature = signature_named(args.signature)
    flat = flat_extension(group, signature)
    if args.out:
        dump_algebra(flat.algebra, args.out)
    else:
        _emit(flat.algebra.to_json())
    if args.check_axioms:
        check = verify_semiring_axioms if signature is SEMIRING else verify_nsoc_axioms
        result = check(flat.algebra, config.assignments)
        if not result.ok:
            _emit(f"axiom '{result.failing_axiom}' fails at {result.assignment}")
            return EXIT_FAILS
        _emit("axioms hold")
    return EXIT_OK


def cmd_translate(args: argparse.Namespace, config: Config) -> int:
    quasi = parse_quasi_equation(args.quasi)
    if args.exponent is not None:
        d = args.exponent
    elif args.group:
        d = exponent(_group(args.group, config))
    else:
        raise UsageError("translate needs --exponent or --group")
    if args.semiring:
        quasi = semiring_form(quasi, d)
    _emit(translate_qe_to_eq(quasi, d, pad=not args.no_pad).format())
    return EXIT_OK


def cmd_growth(args: argparse.Namespace, config: Config) -> int:
    generator = _group(args.g, config)
    family = named_family(args.family, config.max_group_order)
    try:
        records = growth_experiment(generator, family, ratio_bound=args.ratio_bound,
                                    signature=signature_named(args.signature),
                                    progress=args.progress,
                                    node_budget=config.hom_nodes,
                                    assignment_budget=config.assignments,
                                    coset_factor=config.coset_factor)
    except RatioBoundExceededError as e:
        _emit(f"ratio bound exceeded: {e}")
        return EXIT_FAILS
    write_growth_csv(records, config.output_path)
    logger.info(f"Wrote {len(records)} records to {config.output_path}")
    _emit(f"wrote {len(records)} records to {config.output_path}")
    return EXIT_OK


def cmd_sylow(args: argparse.Namespace, config: Config) -> int:
    if args.algebra:
        _emit(classify_clifford(_algebra(args.algebra), config.algebra_cap))
        return EXIT_OK
    group = _group(args.group, config)
    report = sylow_classification(group)
    _emit({
        "order": group.order,
        "sylow": [{"prime": s.prime, "order": len(s.elements), "abelian": s.is_abelian}
                  for s in report.subgroups],
        "prediction": complexity_prediction(group),
    })
    return EXIT_OK


def cmd_separate(args: argparse.Namespace, config: Config) -> int:
    failing = _algebra(args.failing)
    holding = _algebra(args.holding)
    equation = shortest_failing_equation(failing, holding, args.max_len,
                                         length_cap=config.equation_length_cap,
                                         budget=config.assignments)
    if equation is None:
        _emit(f"no separating equation of length <= {args.max_len}")
        return EXIT_OK
    _emit(equation.format())
    return EXIT_FAILS


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress messages, -vv for search details")
    common.add_argument("--budget-hom-nodes", type=int, default=DEFAULT_HOM_NODE_BUDGET)
    common.add_argument("--budget-assignments", type=int, default=DEFAULT_ASSIGNMENT_BUDGET)
    common.add_argument("--budget-coset-factor", type=int, default=DEFAULT_COSET_FACTOR)
    common.add_argument("--budget-max-order", type=int, default=DEFAULT_MAX_GROUP_ORDER)
    common.add_argument("--budget-algebra-cap", type=int, default=DEFAULT_ALGEBRA_CAP)
    common.add_argument("--budget-equation-length", type=int, default=DEFAULT_EQUATION_LENGTH_CAP)
    common.add_argument("--corpus-dir", default="corpus", help="where group JSON files named without a path are looked up")

    parser = argparse.ArgumentParser(prog="flat-witness", description=__doc__.strip().splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", parents=[common], help="describe a group")
    p.add_argument("group", help="named spec (cyclic:4, product:(cyclic:2,cyclic:3)) or group JSON file")
    p.add_argument("--table", action="store_true", help="include the multiplication table")
    p.set_defaults(func=cmd_group)

    p = sub.add_parser("present", parents=[common], help="short presentation along a composition series")
    p.add_argument("group")
    p.add_argument("--signature", choices=sorted(_TAGS), default="full")
    p.add_argument("--allow-inverses", action="store_true", help="inverse letters in element normal forms")
    p.add_argument("--metrics", action="store_true", help="print the stage metrics as JSON")
    p.add_argument("--out", help="write the presentation text here")
    p.set_defaults(func=cmd_present)

    p = sub.add_parser("verify", parents=[common], help="verify that a presentation presents a group")
    p.add_argument("group")
    p.add_argument("--presentation", help="presentation text file; built from the group when omitted")
    p.add_argument("--images", help="generator images, e.g. a=1,b=3")
    p.add_argument("--signature", choices=sorted(_TAGS), default="full")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("check", parents=[common], help="check an equation or quasi-equation")
    p.add_argument("--algebra", help="algebra JSON or group JSON file")
    p.add_argument("--group", help="named group spec")
    statement = p.add_mutually_exclusive_group(required=True)
    statement.add_argument("--equation")
    statement.add_argument("--quasi")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("membership", parents=[common], help="decide H in SP(G) or A in V(flat(G))")
    p.add_argument("--g", required=True)
    p.add_argument("--h")
    p.add_argument("--algebra")
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("witness", parents=[common], help="witness that H is not in SP(G)")
    p.add_argument("--g", required=True)
    p.add_argument("--h", required=True)
    p.add_argument("--kind", choices=["quasi", "equation"], default="equation")
    p.add_argument("--signature", choices=[s.name for s in (FLAT, FLAT_UNIT, SEMIRING)],
                   default=FLAT_UNIT.name)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("flatten", parents=[common], help="flat extension of a group as algebra JSON")
    p.add_argument("group")
    p.add_argument("--signature", choices=[s.name for s in (FLAT, FLAT_UNIT, SEMIRING)], default=FLAT.name)
    p.add_argument("--out")
    p.add_argument("--check-axioms", action="store_true")
    p.set_defaults(func=cmd_flatten)

    p = sub.add_parser("translate", parents=[common], help="flat equation of a group quasi-equation")
    p.add_argument("--quasi", required=True)
    p.add_argument("--exponent", type=int)
    p.add_argument("--group", help="take the exponent from this group")
    p.add_argument("--semiring", action="store_true", help="rewrite inverses and 1 with the product first")
    p.add_argument("--no-pad", action="store_true")
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("growth", parents=[common], help="witness lengths along a family of groups")
    p.add_argument("--g", required=True)
    p.add_argument("--family", required=True, help="cyclic2powers:a..b, dihedral:a..b or spec;spec;...")
    p.add_argument("--out", default="growth.csv")
    p.add_argument("--ratio-bound", type=float)
    p.add_argument("--signature", choices=[s.name for s in (FLAT, FLAT_UNIT, SEMIRING)],
                   default=FLAT_UNIT.name)
    p.add_argument("--progress", action="store_true")
    p.set_defaults(func=cmd_growth)

    p = sub.add_parser("sylow", parents=[common], help="Sylow gate for the equational complexity")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--group")
    target.add_argument("--algebra", help="a finite Clifford algebra JSON file")
    p.set_defaults(func=cmd_sylow)

    p = sub.add_parser("separate", parents=[common], help="shortest equation of one algebra failing in another")
    p.add_argument("--failing", required=True)
    p.add_argument("--holding", required=True)
    p.add_argument("--max-len", type=int, default=6)
    p.set_defaults(func=cmd_separate)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    level = logging.WARNING
    if args.verbose == 1:
        level = logging.INFO
    elif args.verbose > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    try:
        config = _config(args)
        return args.func(args, config)
    except (UsageError, ValueError, *_USAGE_ERRORS) as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (VerificationFailedError, PresentationNotVerifiedError) as e:
        logger.error(f"{args.command}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FAILS


if __name__ == "__main__":
    sys.exit(main())
