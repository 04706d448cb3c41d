"""
Budgets and paths shared by every stage of the pipeline.

All algorithms are deterministic (no RNG anywhere), so a Config fully
determines the output of a run. Library functions take individual budgets as
keyword arguments defaulting to the constants below; the command line builds a
Config from its ``--budget-*`` flags and passes the fields through.
"""
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Any, Dict

DEFAULT_HOM_NODE_BUDGET = 10**7
DEFAULT_ASSIGNMENT_BUDGET = 10**8
DEFAULT_COSET_FACTOR = 20
DEFAULT_MAX_GROUP_ORDER = 5040
DEFAULT_ALGEBRA_CAP = 64
DEFAULT_EQUATION_LENGTH_CAP = 10
DEFAULT_EQUATION_COUNT_BUDGET = 10**6


class BudgetExceededError(Exception):
    """Raised when a search would exceed its configured budget."""
    pass


@dataclass(frozen=True)
class Config:
    """Run configuration. Every budget must be positive."""
    hom_nodes: int = DEFAULT_HOM_NODE_BUDGET
    assignments: int = DEFAULT_ASSIGNMENT_BUDGET
    coset_factor: int = DEFAULT_COSET_FACTOR
    max_group_order: int = DEFAULT_MAX_GROUP_ORDER
    algebra_cap: int = DEFAULT_ALGEBRA_CAP
    equation_length_cap: int = DEFAULT_EQUATION_LENGTH_CAP
    corpus_dir: Path = field(default_factory=lambda: Path("corpus"))
    output_path: Path = field(default_factory=lambda: Path("growth.csv"))

    def __post_init__(self):
        for name in ("hom_nodes", "assignments", "coset_factor",
                     "max_group_order", "algebra_cap", "equation_length_cap"):
            value = getattr(self, name)
            if not isinstance(value, int) or value <= 0:
                raise ValueError(f"Budget '{name}' must be a positive integer, got {value!r}")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["corpus_dir"] = str(self.corpus_dir)
        data["output_path"] = str(self.output_path)
        return data
