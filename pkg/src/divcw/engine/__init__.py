"""Generic DP-core engine: single solving and diversity liftings."""

from divcw.engine.dp import (
    CoreContractError,
    DpCore,
    Entry,
    NodeTable,
    SingleResult,
    Witness,
    check_witness,
    extract_solution,
    iter_witnesses,
    reachable_tables,
    reconstruct_witness,
    solve_single,
    witness_solutions,
)
from divcw.engine.diverse import (
    DiverseResult,
    TableTooLarge,
    diverse_solve,
    min_diverse_solve,
    root_key_tuples,
)

__all__ = [
    "CoreContractError",
    "DiverseResult",
    "DpCore",
    "Entry",
    "NodeTable",
    "SingleResult",
    "TableTooLarge",
    "Witness",
    "check_witness",
    "diverse_solve",
    "extract_solution",
    "iter_witnesses",
    "min_diverse_solve",
    "reachable_tables",
    "reconstruct_witness",
    "root_key_tuples",
    "solve_single",
    "witness_solutions",
]
