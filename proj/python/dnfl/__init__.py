import json

from ._dnfl import (
    BudgetExhausted,
    ContractViolation,
    Dnf,
    bound_degree,
    derive_params,
    evaluate,
    fwht,
    km,
    mu_transform,
    transform,
    verify_bounds,
)
from ._dnfl import _learn


def learn(spec):
    """Run the learn command; `spec` is a dict in the CLI config format.

    Returns (manifest dict, list of chain texts)."""
    manifest, chains, _ = _learn(json.dumps(spec))
    return json.loads(manifest), chains


__all__ = [
    "BudgetExhausted",
    "ContractViolation",
    "Dnf",
    "bound_degree",
    "derive_params",
    "evaluate",
    "fwht",
    "km",
    "learn",
    "mu_transform",
    "transform",
    "verify_bounds",
]
