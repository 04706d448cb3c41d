"""
Growth of witness lengths along a family of groups outside SP(G).
"""
import csv
import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Iterable, List, Optional, Sequence, Union

from tqdm import tqdm

from flat_witness.config import DEFAULT_ASSIGNMENT_BUDGET, DEFAULT_COSET_FACTOR, DEFAULT_HOM_NODE_BUDGET
from flat_witness.groups.core import FiniteGroup
from flat_witness.membership.witness import PreconditionViolatedError, witness_equation_flat
from flat_witness.model.terms import FLAT_UNIT, Signature
from flat_witness.presentation.lifting import SimpleCatalog

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["label", "order", "pres_len", "qe_len", "eq_len", "log2cube", "pres_ratio", "qe_ratio", "eq_ratio"]


class RatioBoundExceededError(Exception):
    """Raised when a witness length exceeds the bound times log2^3 |H|."""
    pass


@dataclass(frozen=True)
class GrowthRecord:
    label: str
    order: int
    pres_len: int
    qe_len: int
    eq_len: int

    @property
    def log2cube(self) -> float:
        return math.log2(self.order) ** 3

    @property
    def pres_ratio(self) -> float:
        return self.pres_len / self.log2cube

    @property
    def qe_ratio(self) -> float:
        return self.qe_len / self.log2cube

    @property
    def eq_ratio(self) -> float:
        return self.eq_len / self.log2cube

    def row(self) -> List[str]:
        return [
            self.label, str(self.order), str(self.pres_len), str(self.qe_len), str(self.eq_len),
            f"{self.log2cube:.6f}", f"{self.pres_ratio:.6f}", f"{self.qe_ratio:.6f}", f"{self.eq_ratio:.6f}",
        ]


def growth_experiment(
    generator: FiniteGroup,
    family: Sequence[FiniteGroup],
    ratio_bound: Optional[float] = None,
    signature: Signature = FLAT_UNIT,
    progress: bool = False,
    node_budget: int = DEFAULT_HOM_NODE_BUDGET,
    assignment_budget: int = DEFAULT_ASSIGNMENT_BUDGET,
    coset_factor: int = DEFAULT_COSET_FACTOR,
) -> List[GrowthRecord]:
    """
    Witness lengths for every H of the family, in family order.

    One simple-group catalog is shared across the family.

    Raises:
        PreconditionViolatedError: some H lies in SP(G); the message names it.
        RatioBoundExceededError: ratio_bound is set and the equation ratio of
            some H exceeds it.
    """
    catalog = SimpleCatalog(coset_factor=coset_factor, node_budget=node_budget)
    records: List[GrowthRecord] = []
    for member in tqdm(family, desc="growth", disable=not progress):
        try:
            witness = witness_equation_flat(generator, member, signature, catalog,
                                            node_budget=node_budget,
                                            assignment_budget=assignment_budget,
                                            coset_factor=coset_factor)
        except PreconditionViolatedError as e:
            logger.error(f"Family member {member.label} is in SP({generator.label})")
            raise PreconditionViolatedError(f"{member.label}: {e}") from e
        record = GrowthRecord(
            label=member.label,
            order=member.order,
            pres_len=witness.quasi.built.presentation.total_length,
            qe_len=witness.quasi.quasi_equation.length,
            eq_len=witness.equation.length,
        )
        logger.info(f"{record.label}: pres {record.pres_len}, qe {record.qe_len}, eq {record.eq_len}, "
                    f"eq ratio {record.eq_ratio:.3f}")
        if ratio_bound is not None and record.eq_ratio > ratio_bound:
            raise RatioBoundExceededError(
                f"{record.label}: equation ratio {record.eq_ratio:.6f} exceeds {ratio_bound}")
        records.append(record)
    return records


def write_growth_csv(records: Iterable[GrowthRecord], out: Union[str, Path, IO[str]]) -> None:
    """CSV with a header row; ratios are written with six decimals."""
    if isinstance(out, (str, Path)):
        with open(out, "w", encoding="utf-8", newline="") as f:
            write_growth_csv(records, f)
        return
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in records:
        writer.writerow(record.row())
