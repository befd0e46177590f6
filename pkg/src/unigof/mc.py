"""Monte Carlo engine: critical values, size/power studies, power curves.

One engine drives every table-style result. A study is a grid of cells,
where a cell is one (null family or alternative, sample size) pair; all
requested tests are evaluated on the same simulated draws within a cell,
exactly as a simulation study would share them. Cells are independent
tasks, so the engine parallelises across cells, never inside one.

Reproducibility discipline: every replication draws from its own
substream seeded by (master_seed, cell_salt, replication_index), where
the cell salt is a stable hash of the cell's identity. Results are
therefore bit-identical for a fixed master seed no matter how many
workers run the study or in which order cells finish.
"""

from __future__ import annotations

import hashlib
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .classical import TEST_IDS, batch_statistic
from .composite import FAMILIES as COMPOSITE_FAMILIES
from .distributions import AlternativeSpec, pdf, sample, supports_unit_interval
from .null_limit import cumulants_exact, pearson_fit, pearson_quantile
from .numerics import gauss_legendre
from .power_theory import (
    AlternativeTheorySpec,
    PowerCurve,
    approximate_power,
    asymptotic_variance,
    builtin_beta_specs,
    discrepancy,
    spec_from_density,
    uniform_theory_spec,
)

__all__ = [
    "StudyConfig",
    "StudyResult",
    "CellResult",
    "rng_substream",
    "estimate_critical_values",
    "estimate_power",
    "run_power_curve",
    "critical_value_map",
    "write_study_csv",
    "read_study_csv",
    "format_critval_table",
    "format_power_table",
]

_CHUNK = 4096
_NULL_FAMILIES = ("uniform", "normal", "pareto")


def rng_substream(master_seed: int, *indices: int) -> np.random.Generator:
    """Independent, reproducible generator for one unit of work.

    Seeding with the full index tuple keeps streams statistically
    separated without any global counter, so workers need no coordination.
    """
    return np.random.default_rng((int(master_seed),) + tuple(int(i) for i in indices))


def _cell_salt(*parts) -> int:
    key = "\x1f".join(str(p) for p in parts)
    return int.from_bytes(hashlib.sha256(key.encode("utf-8")).digest()[:8], "little")


@dataclass(frozen=True)
class StudyConfig:
    """Full description of one simulation study."""

    mode: str
    tests: tuple[str, ...]
    family: str
    alternatives: tuple[AlternativeSpec, ...]
    sizes: tuple[int, ...]
    alphas: tuple[float, ...]
    replications: int
    master_seed: int
    workers: int = 1

    def __post_init__(self) -> None:
        if self.mode not in ("critical_values", "power", "size", "power_curve"):
            raise ValueError(f"unknown study mode {self.mode!r}")
        object.__setattr__(self, "tests", tuple(self.tests))
        object.__setattr__(self, "alternatives", tuple(self.alternatives))
        object.__setattr__(self, "sizes", tuple(int(n) for n in self.sizes))
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        for t in self.tests:
            if t not in TEST_IDS:
                raise ValueError(f"unknown test id {t!r}; expected one of {TEST_IDS}")
        if not self.tests:
            raise ValueError("at least one test id is required")
        if self.family not in _NULL_FAMILIES:
            raise ValueError(f"family must be one of {_NULL_FAMILIES}")
        if self.replications < 100:
            raise ValueError("replications must be at least 100")
        if not self.sizes or any(n < 1 for n in self.sizes):
            raise ValueError("sizes must be positive integers")
        if any(not 0.0 < a < 1.0 for a in self.alphas):
            raise ValueError("alphas must lie strictly inside (0, 1)")
        if self.workers < 1:
            raise ValueError("workers must be a positive integer")
        if self.family == "uniform":
            for alt in self.alternatives:
                if not supports_unit_interval(alt):
                    raise ValueError(
                        f"alternative {alt.label()} is not supported on the unit interval; "
                        "uniformity studies need unit-interval alternatives"
                    )


@dataclass(frozen=True)
class CellResult:
    test: str
    alternative: str
    n: int
    alpha: float
    estimate: float
    mc_se: float
    replications: int
    seed: int


@dataclass
class StudyResult:
    mode: str
    rows: list[CellResult]
    master_seed: int
    wall_seconds: float = field(default=0.0, compare=False)


def _quantile_sorted(sorted_vals: np.ndarray, p: float) -> float:
    # index h = R * p into the 1-based order statistics, linearly
    # interpolated between neighbours and clamped at the ends
    R = sorted_vals.size
    h = R * p
    k = int(np.floor(h))
    k = min(max(k, 1), R - 1)
    frac = h - k
    frac = min(max(frac, 0.0), 1.0)
    lo = sorted_vals[k - 1]
    return float(lo + frac * (sorted_vals[k] - lo))


def _quantile_se(sorted_vals: np.ndarray, p: float) -> float:
    # half-width of the order-statistic bracket one binomial SD away
    R = sorted_vals.size
    eps = np.sqrt(p * (1.0 - p) / R)
    hi = _quantile_sorted(sorted_vals, min(p + eps, 1.0))
    lo = _quantile_sorted(sorted_vals, max(p - eps, 0.0))
    return float(0.5 * (hi - lo))


def _null_row(family: str, n: int, rng: np.random.Generator) -> np.ndarray:
    if family == "uniform":
        return rng.random(n)
    return COMPOSITE_FAMILIES[family].sample_standard(n, rng)


def _unit_chunk_null(family: str, n: int, salt: int, seed: int, start: int, count: int) -> np.ndarray:
    raw = np.empty((count, n))
    for i in range(count):
        raw[i] = _null_row(family, n, rng_substream(seed, salt, start + i))
    if family == "uniform":
        return raw
    return COMPOSITE_FAMILIES[family].transform_rows(raw)


def _unit_chunk_alt(
    family: str, alt: AlternativeSpec, n: int, salt: int, seed: int, start: int, count: int
) -> np.ndarray:
    raw = np.empty((count, n))
    for i in range(count):
        raw[i] = sample(alt, n, rng_substream(seed, salt, start + i)).values
    if family == "uniform":
        return raw
    return COMPOSITE_FAMILIES[family].transform_rows(raw)


def _critval_cell(args) -> list[CellResult]:
    seed, family, n, tests, alphas, reps = args
    salt = _cell_salt("critval", family, n)
    acc = {t: np.empty(reps) for t in tests}
    for start in range(0, reps, _CHUNK):
        count = min(_CHUNK, reps - start)
        U = _unit_chunk_null(family, n, salt, seed, start, count)
        for t in tests:
            acc[t][start:start + count] = batch_statistic(t, U)
    rows = []
    for t in tests:
        ordered = np.sort(acc[t])
        for a in alphas:
            rows.append(
                CellResult(
                    test=t,
                    alternative=family,
                    n=n,
                    alpha=a,
                    estimate=_quantile_sorted(ordered, 1.0 - a),
                    mc_se=_quantile_se(ordered, 1.0 - a),
                    replications=reps,
                    seed=seed,
                )
            )
    return rows


def _power_cell(args) -> list[CellResult]:
    seed, family, alt, n, tests, alphas, reps, cv_map = args
    salt = _cell_salt("power", family, alt.label(), n)
    hits = {(t, a): 0 for t in tests for a in alphas}
    for start in range(0, reps, _CHUNK):
        count = min(_CHUNK, reps - start)
        U = _unit_chunk_alt(family, alt, n, salt, seed, start, count)
        for t in tests:
            stats = batch_statistic(t, U)
            for a in alphas:
                hits[(t, a)] += int(np.sum(stats > cv_map[(t, n, a)]))
    rows = []
    for t in tests:
        for a in alphas:
            p_hat = hits[(t, a)] / reps
            rows.append(
                CellResult(
                    test=t,
                    alternative=alt.label(),
                    n=n,
                    alpha=a,
                    estimate=p_hat,
                    mc_se=float(np.sqrt(p_hat * (1.0 - p_hat) / reps)),
                    replications=reps,
                    seed=seed,
                )
            )
    return rows


def _run_cells(worker_count: int, fn, tasks: list) -> list[CellResult]:
    if worker_count == 1 or len(tasks) <= 1:
        results = [fn(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=worker_count) as pool:
            results = list(pool.map(fn, tasks))
    return [row for cell_rows in results for row in cell_rows]


def estimate_critical_values(config: StudyConfig) -> StudyResult:
    """Empirical null quantiles for every (test, n, alpha) in the config.

    Uniform nulls draw directly; composite nulls draw from the standard
    member and re-estimate per replication, which by pivotality gives the
    null law for every parameter value.
    """
    if config.mode != "critical_values":
        raise ValueError("config.mode must be 'critical_values'")
    started = time.perf_counter()
    tasks = [
        (config.master_seed, config.family, n, config.tests, config.alphas, config.replications)
        for n in config.sizes
    ]
    rows = _run_cells(config.workers, _critval_cell, tasks)
    return StudyResult(
        mode=config.mode,
        rows=rows,
        master_seed=config.master_seed,
        wall_seconds=time.perf_counter() - started,
    )


def critical_value_map(result: StudyResult) -> dict[tuple[str, int, float], float]:
    """Index a study result by (test, n, alpha) for fast lookup."""
    return {(r.test, r.n, r.alpha): r.estimate for r in result.rows}


def estimate_power(config: StudyConfig, critical_values: StudyResult) -> StudyResult:
    """Rejection rates per (test, alternative, n, alpha) cell.

    Size studies are the special case where the alternatives are null
    members; nothing in the machinery distinguishes them.
    """
    if config.mode not in ("power", "size"):
        raise ValueError("config.mode must be 'power' or 'size'")
    cv_map = critical_value_map(critical_values)
    for t in config.tests:
        for n in config.sizes:
            for a in config.alphas:
                if (t, n, a) not in cv_map:
                    raise ValueError(f"missing critical value for test={t!r}, n={n}, alpha={a}")
    if not config.alternatives:
        raise ValueError("power mode needs at least one alternative")
    started = time.perf_counter()
    tasks = [
        (
            config.master_seed,
            config.family,
            alt,
            n,
            config.tests,
            config.alphas,
            config.replications,
            cv_map,
        )
        for alt in config.alternatives
        for n in config.sizes
    ]
    rows = _run_cells(config.workers, _power_cell, tasks)
    return StudyResult(
        mode=config.mode,
        rows=rows,
        master_seed=config.master_seed,
        wall_seconds=time.perf_counter() - started,
    )


def theory_spec_for(alt: AlternativeSpec) -> AlternativeTheorySpec:
    """Match an alternative to its theory spec, or build one numerically."""
    if alt.family == "uniform" and not alt.translate_by_one:
        return uniform_theory_spec()
    for spec in builtin_beta_specs():
        if (
            alt.family == "beta"
            and not alt.translate_by_one
            and spec.name == f"beta({alt.params[0]:g},{alt.params[1]:g})"
        ):
            return spec
    if not supports_unit_interval(alt):
        raise ValueError(
            f"no fixed-alternative theory for {alt.label()}: support is not the unit interval"
        )
    return spec_from_density(alt.label(), lambda x: np.asarray(pdf(alt, x)), gauss_legendre(128))


def run_power_curve(config: StudyConfig, alpha: float = 0.05) -> PowerCurve:
    """Empirical power of the tail-moment test across sizes, with overlay.

    The critical value is the asymptotic one from the Pearson fit of the
    null cumulants, held constant across n; the analytic overlay uses the
    same constant, so the two columns answer the same question.
    """
    if config.mode != "power_curve":
        raise ValueError("config.mode must be 'power_curve'")
    if len(config.alternatives) != 1:
        raise ValueError("power_curve mode expects exactly one alternative")
    if config.family != "uniform":
        raise ValueError("power curves are defined for the uniformity test")
    alt = config.alternatives[0]
    theory = theory_spec_for(alt)
    rule = gauss_legendre(128)
    delta = theory.delta if theory.delta is not None else discrepancy(theory, rule)
    sigma2 = theory.sigma2 if theory.sigma2 is not None else asymptotic_variance(theory, rule)
    # the uniform curve has sigma2 = 0: no normal approximation, empirical
    # power is just the size of the test
    approx_available = sigma2 > 0.0
    c_limit = pearson_quantile(pearson_fit(cumulants_exact()), 1.0 - alpha)

    empirical: list[float] = []
    ses: list[float] = []
    reps = config.replications
    for n in config.sizes:
        salt = _cell_salt("curve", alt.label(), n)
        hit = 0
        for start in range(0, reps, _CHUNK):
            count = min(_CHUNK, reps - start)
            U = _unit_chunk_alt("uniform", alt, n, salt, config.master_seed, start, count)
            hit += int(np.sum(batch_statistic("tm", U) > c_limit))
        p_hat = hit / reps
        empirical.append(p_hat)
        ses.append(float(np.sqrt(p_hat * (1.0 - p_hat) / reps)))
    approx = [
        approximate_power(delta, sigma2, n, c_limit) if approx_available else float("nan")
        for n in config.sizes
    ]
    return PowerCurve(
        name=alt.label(),
        alpha=alpha,
        sample_sizes=list(config.sizes),
        approx_power=approx,
        empirical_power=empirical,
        mc_se=ses,
    )


# ---------------------------------------------------------------------------
# serialization and table formatting


_CSV_HEADER = "test,alternative,n,alpha,estimate,mc_se,replications,seed"


def write_study_csv(result: StudyResult, path) -> None:
    """Serialise a study grid; floats use repr so files are bit-stable."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(_CSV_HEADER + "\n")
        for r in result.rows:
            fh.write(
                f"{r.test},{r.alternative},{r.n},{r.alpha!r},"
                f"{r.estimate!r},{r.mc_se!r},{r.replications},{r.seed}\n"
            )


def read_study_csv(path) -> StudyResult:
    rows: list[CellResult] = []
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().strip()
        if header != _CSV_HEADER:
            raise ValueError(f"unexpected study CSV header: {header!r}")
        for line_no, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 8:
                raise ValueError(f"line {line_no}: expected 8 fields, got {len(parts)}")
            rows.append(
                CellResult(
                    test=parts[0],
                    alternative=parts[1],
                    n=int(parts[2]),
                    alpha=float(parts[3]),
                    estimate=float(parts[4]),
                    mc_se=float(parts[5]),
                    replications=int(parts[6]),
                    seed=int(parts[7]),
                )
            )
    seed = rows[0].seed if rows else 0
    return StudyResult(mode="loaded", rows=rows, master_seed=seed)


def format_critval_table(result: StudyResult) -> str:
    """Critical values laid out with one row per alpha, one column per n."""
    sizes = sorted({r.n for r in result.rows})
    alphas = sorted({r.alpha for r in result.rows}, reverse=True)
    tests = sorted({r.test for r in result.rows})
    by_key = {(r.test, r.n, r.alpha): r.estimate for r in result.rows}
    blocks = []
    for t in tests:
        lines = [f"test {t}", "alpha\\n  " + "  ".join(f"{n:>7d}" for n in sizes)]
        for a in alphas:
            cells = "  ".join(f"{by_key[(t, n, a)]:7.3f}" for n in sizes)
            lines.append(f"{a:<8g}  {cells}")
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks)


def format_power_table(result: StudyResult, percent: bool = True) -> str:
    """Power grid with one row per alternative, one column per test."""
    alts = list(dict.fromkeys(r.alternative for r in result.rows))
    tests = list(dict.fromkeys(r.test for r in result.rows))
    combos = sorted({(r.n, r.alpha) for r in result.rows})
    by_key = {(r.alternative, r.test, r.n, r.alpha): r.estimate for r in result.rows}
    width = max([len(a) for a in alts] + [11])
    blocks = []
    for n, a in combos:
        lines = [
            f"n={n}, alpha={a:g}" + (", entries in %" if percent else ""),
            "alternative".ljust(width) + "  " + "  ".join(f"{t:>7s}" for t in tests),
        ]
        for alt in alts:
            cells = []
            for t in tests:
                val = by_key.get((alt, t, n, a))
                if val is None:
                    cells.append("      .")
                elif percent:
                    cells.append(f"{100.0 * val:7.0f}")
                else:
                    cells.append(f"{val:7.3f}")
            lines.append(alt.ljust(width) + "  " + "  ".join(cells))
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks)
