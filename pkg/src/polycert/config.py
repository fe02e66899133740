from __future__ import annotations
import os
from dataclasses import dataclass, field, replace
from typing import FrozenSet, Optional

SEED_ENV = "POLYCERT_SEED"
SCHEMA_TAG = "polycert-1"
DEFAULT_BUDGET_MS = 2000
# Miller–Rabin with the first 13 prime bases is exact below this bound
DETERMINISTIC_MR_LIMIT = 3_317_044_064_679_887_385_961_981
ALL_CRITERIA = frozenset({"t1", "t2", "t3", "t4", "l3", "l4", "l5"})


def seed_from_env(default: int = 0) -> int:
    raw = os.getenv(SEED_ENV)
    if raw is None or raw.strip() == "":
        return default
    return int(raw)


@dataclass(frozen=True)
class Params:
    # Factoring
    factor_budget_ms: int = DEFAULT_BUDGET_MS
    trial_division_limit: int = 1_000_000
    mr_rounds: int = 40
    seed: int = field(default_factory=seed_from_env)

    # Witness scan
    m_window: int = 1000           # default m_max = ceil(h_f) + m_window
    n_jobs: int = 1
    chunk_size: int = 64

    # largest denominator nth_root_upper may use
    root_denominator: int = 10_000

    # Brute-force oracle limits
    oracle_max_degree: int = 8
    oracle_coeff_cap: int = 10**6
    oracle_search_cap: int = 10**6

PARAMS = Params()


def update_params(**kwargs):
    """Replace :data:`PARAMS` values based on provided keyword arguments.

    Only keys with non-``None`` values are applied, so the CLI can pass its
    optional flags straight through.
    """
    global PARAMS
    update = {k: v for k, v in kwargs.items() if v is not None}
    if update:
        PARAMS = replace(PARAMS, **update)


@dataclass(frozen=True)
class ScanConfig:
    """Settings for one ``analyze`` run. ``None`` bounds are derived from h_f."""
    m_min: Optional[int] = None
    m_max: Optional[int] = None
    factor_budget_ms: Optional[int] = None
    criteria: FrozenSet[str] = ALL_CRITERIA

    def budget_ms(self) -> int:
        if self.factor_budget_ms is None:
            return PARAMS.factor_budget_ms
        return self.factor_budget_ms
