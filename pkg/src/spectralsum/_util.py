"""Small shared helpers: budgets, norms, deterministic reductions."""
import os

import numpy as np

DEFAULT_BUDGET = 2 ** 20
BUDGET_ENV = "SPECTRAL_SUM_BUDGET"


def enumeration_budget(budget=None):
    """Resolve an enumeration budget; the environment variable wins over the default."""
    if budget is not None:
        return int(budget)
    env = os.environ.get(BUDGET_ENV)
    if env:
        return int(float(env))
    return DEFAULT_BUDGET


def opnorm(m):
    """Spectral (operator 2-) norm."""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


def tree_sum(stack):
    """Pairwise reduction over axis 0 in a fixed order.

    Bit-stable for a given input regardless of how the stack was produced.
    """
    x = np.asarray(stack)
    if x.shape[0] == 0:
        return np.zeros(x.shape[1:], dtype=x.dtype)
    while x.shape[0] > 1:
        if x.shape[0] % 2:
            head = x[:-1:2] + x[1::2]
            x = np.concatenate([head, x[-1:]], axis=0)
        else:
            x = x[0::2] + x[1::2]
    return x[0]


def frozen(arr, dtype=None):
    a = np.array(arr, dtype=dtype, copy=True)
    a.setflags(write=False)
    return a
