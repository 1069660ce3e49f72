"""Shared fixtures and model generators for the test suite."""

import numpy as np
import pytest

from diamondsphere import (
    DiamondModel,
    ModelSpec,
    build_partition,
    generate,
    simple_model,
    sup_discrepancy_exact,
    validate,
)


def make_random_spec(rng: np.random.Generator, m_lo: int = 2, m_hi: int = 30,
                     theta_policy="zeros") -> ModelSpec:
    """Random integer model satisfying every validation constraint.

    Slopes after the first piece are drawn at or below
    beta + alpha // t, which keeps the next intercept nonnegative.
    """
    M = int(rng.integers(m_lo, m_hi + 1))
    n = int(rng.integers(1, min(4, M) + 1))
    if n > 1:
        cuts = sorted(int(v) for v in
                      rng.choice(np.arange(1, M), size=n - 1, replace=False))
    else:
        cuts = []
    t = [0] + cuts + [M]
    alpha = [0]
    beta = [int(rng.integers(1, 7))]
    for ell in range(1, n):
        b_max = beta[-1] + alpha[-1] // t[ell]
        b = int(rng.integers(0, b_max + 1))
        alpha.append(alpha[-1] + (beta[-1] - b) * t[ell])
        beta.append(b)
    return ModelSpec(M=M, n=n, t=tuple(t), alpha=tuple(alpha),
                     beta=tuple(beta), theta_policy=theta_policy)


def random_unit_points(rng: np.random.Generator, n: int) -> np.ndarray:
    v = rng.standard_normal((n, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


@pytest.fixture(scope="session")
def octahedron() -> DiamondModel:
    return validate(simple_model(1))


@pytest.fixture(scope="session")
def octahedron_points(octahedron):
    return generate(octahedron)


@pytest.fixture(scope="session")
def simple_suite():
    """model, points, partition for the small one-piece models."""
    out = {}
    for M in range(1, 7):
        model = validate(simple_model(M))
        out[M] = (model, generate(model), build_partition(model))
    return out


@pytest.fixture(scope="session")
def exact_sup_cache(simple_suite):
    """Exact sup-cap discrepancies for one-piece models, computed once."""
    cache = {}

    def get(M: int):
        if M not in cache:
            cache[M] = sup_discrepancy_exact(simple_suite[M][1])
        return cache[M]

    return get
