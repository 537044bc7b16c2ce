"""Self-tuning cube-and-conquer: partition a hard CNF formula into cubes,
learn a solver configuration online from difficulty-banded cubes, validate
it, and solve the remainder with the winning policy."""

from .backend import (
    Backend,
    ExternalBackend,
    ExternalSolverConfig,
    MiniCdclBackend,
)
from .bench import gen_benchmark, php, random3cnf, xor_miter
from .collect import CollectConfig, CollectResult, CubeRecord, collect, effective_budget, make_queue
from .cubers import CubeResult, LookaheadCuber, UnitClauseCuber
from .formula import (
    Cube,
    Formula,
    TOP,
    brute_force_sat,
    conjoin,
    model_satisfies,
    parse_dimacs,
    parse_icnf,
    write_dimacs,
    write_icnf,
)
from .minicdcl import SAT, UNKNOWN, UNSAT, MiniSolverParams, SolveOutcome, solve
from .orchestrate import RunConfig, RunReport, common_cube_costs, plain_cnc, sdac
from .runlog import RunLog, render_csv_panels, solving_costs_csv, tuning_costs_csv, validation_costs_csv
from .strategy import ParamDef, Strategy, StrategySpace, kissat_style_space, mini_solver_space, split_heuristic_space
from .tune import CubeCostOracle, TuneConfig, TuneReport, acceptance_probability, chain_states, probe_initialize, tune
from .validate import FinalPolicy, ValidationReport, solve_with_policy, validate

__version__ = "0.1.0"
