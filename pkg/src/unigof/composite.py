"""Composite hypotheses: estimate the family parameters, then test the fit.

Two location-scale-free families are supported. For normality the sample
is standardised by the maximum likelihood estimates (variance divisor n,
not n - 1) and pushed through the normal CDF. For the Pareto shape family
the shape estimate enters through a power transform whose re-estimated
shape is exactly one, after which the unit-shape CDF applies. Both
constructions are pivotal: the transformed sample's distribution does not
depend on the true parameter, which is what makes fixed critical-value
tables possible.

P-values come from a parametric bootstrap that re-estimates parameters in
every replicate, mirroring what was done to the data.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .classical import batch_statistic
from .numerics import normal_cdf
from .statistic import Sample, UnitSample

__all__ = [
    "CompositeFamily",
    "BootstrapResult",
    "FAMILIES",
    "estimate_normal",
    "transform_normal",
    "estimate_pareto",
    "transform_pareto",
    "null_unit_matrix",
    "bootstrap_pvalue",
]


def _values(x) -> np.ndarray:
    return x.values if isinstance(x, Sample) else np.asarray(x, dtype=float)


def estimate_normal(x) -> tuple[float, float]:
    """Maximum likelihood mean and standard deviation (divisor n)."""
    v = _values(x)
    if v.size < 2:
        raise ValueError("normal estimation needs at least two observations")
    mu = float(np.mean(v))
    var = float(np.mean((v - mu) ** 2))
    if var <= 0.0:
        raise ValueError("sample variance is zero; the normal fit is degenerate")
    return mu, float(np.sqrt(var))


def transform_normal(x) -> UnitSample:
    """Probability transform of the scaled residuals."""
    v = _values(x)
    mu, sigma = estimate_normal(v)
    return UnitSample(normal_cdf((v - mu) / sigma))


def estimate_pareto(x) -> float:
    """Maximum likelihood shape for the unit-scale Pareto family."""
    v = _values(x)
    if np.any(v <= 1.0):
        bad = float(v[v <= 1.0][0])
        raise ValueError(f"Pareto data must exceed 1; found {bad!r}")
    return float(v.size / np.sum(np.log(v)))


def transform_pareto(x) -> UnitSample:
    """Shape-free probability transform for Pareto data.

    Raising the data to the estimated shape gives a sample whose own shape
    estimate is exactly one, so the unit-shape CDF 1 - 1/y applies without
    further estimation. The result is invariant to powering the data,
    which is the family's group structure.
    """
    v = _values(x)
    beta = estimate_pareto(v)
    return UnitSample(-np.expm1(-beta * np.log(v)))


def _normal_rows(X: np.ndarray) -> np.ndarray:
    mu = X.mean(axis=1, keepdims=True)
    var = np.mean((X - mu) ** 2, axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        U = normal_cdf((X - mu) / np.sqrt(var))
    U[np.broadcast_to(var <= 0.0, U.shape)] = np.nan
    return U


def _pareto_rows(X: np.ndarray) -> np.ndarray:
    L = np.log(X)
    total = L.sum(axis=1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        U = -np.expm1(-(X.shape[1] / total) * L)
    bad = (total <= 0.0) | ~np.isfinite(total)
    U[np.broadcast_to(bad, U.shape)] = np.nan
    return U


@dataclass(frozen=True)
class CompositeFamily:
    """Estimator, transform and standard-member sampler for one family."""

    tag: str
    estimator: Callable
    transform: Callable
    transform_rows: Callable[[np.ndarray], np.ndarray]
    sample_standard: Callable[[tuple[int, int], np.random.Generator], np.ndarray]
    sample_fitted: Callable


def _normal_standard(shape, rng):
    return rng.standard_normal(shape)


def _normal_fitted(params, shape, rng):
    mu, sigma = params
    return mu + sigma * rng.standard_normal(shape)


def _pareto_standard(shape, rng):
    return (1.0 - rng.random(shape)) ** -1.0


def _pareto_fitted(params, shape, rng):
    return (1.0 - rng.random(shape)) ** (-1.0 / params)


FAMILIES: dict[str, CompositeFamily] = {
    "normal": CompositeFamily(
        "normal",
        estimate_normal,
        transform_normal,
        _normal_rows,
        _normal_standard,
        _normal_fitted,
    ),
    "pareto": CompositeFamily(
        "pareto",
        estimate_pareto,
        transform_pareto,
        _pareto_rows,
        _pareto_standard,
        _pareto_fitted,
    ),
}


def null_unit_matrix(tag: str, reps: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Unit-interval samples distributed as the null of the named family.

    ``uniform`` draws directly; the composite families draw from their
    standard member and apply the estimated transform row by row, which by
    pivotality is the null distribution for every parameter value.
    """
    if tag == "uniform":
        return rng.random((reps, n))
    family = FAMILIES.get(tag)
    if family is None:
        raise ValueError(f"unknown null family {tag!r}; expected uniform, normal or pareto")
    return family.transform_rows(family.sample_standard((reps, n), rng))


@dataclass(frozen=True)
class BootstrapResult:
    p_value: float
    replications: int
    observed_statistic: float
    test_id: str
    family_tag: str

    def __post_init__(self) -> None:
        if not 0.0 < self.p_value <= 1.0:
            raise ValueError("p_value must lie in (0, 1]")
        if self.replications < 1:
            raise ValueError("replications must be positive")


def bootstrap_pvalue(
    family, kind: str, x, B: int, rng: np.random.Generator
) -> BootstrapResult:
    """Parametric bootstrap p-value for one statistic on one sample.

    Fits the family to the data, computes the observed statistic on the
    transformed sample, then repeats estimate-transform-evaluate on B
    samples drawn from the fitted member. The p-value uses the add-one
    convention (1 + exceedances) / (B + 1), which is valid at any finite B.
    Replicates whose estimation degenerates are dropped; more than 1% of
    them failing aborts the run.
    """
    if isinstance(family, str):
        resolved = FAMILIES.get(family)
        if resolved is None:
            raise ValueError(f"unknown composite family {family!r}")
        family = resolved
    if B < 99:
        raise ValueError("B must be at least 99 for a meaningful p-value")

    v = _values(x)
    params = family.estimator(v)
    observed = float(batch_statistic(kind, family.transform(v).values[None, :])[0])

    draws = family.sample_fitted(params, (int(B), v.size), rng)
    U = family.transform_rows(draws)
    row_ok = np.all(np.isfinite(U), axis=1)
    stats_boot = np.full(B, np.nan)
    if np.any(row_ok):
        stats_boot[row_ok] = batch_statistic(kind, U[row_ok])
    valid = np.isfinite(stats_boot)
    n_valid = int(valid.sum())
    if B - n_valid > 0.01 * B:
        raise RuntimeError(
            f"{B - n_valid} of {B} bootstrap replicates failed estimation; "
            "the fitted model looks degenerate"
        )
    exceed = int(np.sum(stats_boot[valid] >= observed))
    return BootstrapResult(
        p_value=(1.0 + exceed) / (n_valid + 1.0),
        replications=n_valid,
        observed_statistic=observed,
        test_id=kind,
        family_tag=family.tag,
    )
