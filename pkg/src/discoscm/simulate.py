"""Monte Carlo engine for continuous-noise counterfactual experiments.

Draws cross-world outcome pairs (y0, y1) whose noise copies are
standard normal in every world, with the cross-world correlation set by
a regime: shared copies (correlation one, the classical limit),
independent copies, or a configurable correlation per covariate value.
Also generates the heterogeneous-effect dataset with three covariates
(x0 scales the effect, x1 selects the noise correlation, x2 scales the
noise) and masks one arm per unit to produce a factual trial table.

Randomness comes from a counter-based generator: every draw is a hash
of (seed, stream, unit), so results are bit-reproducible, trivially
parallel, and adding units never perturbs earlier units' draws.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

import numpy as np
from scipy.special import ndtri

from .errors import InvalidRhoError, TypeMismatchError

SHARED = "shared"
CORRELATED = "correlated"
INDEPENDENT = "independent"

REGIMES = (SHARED, CORRELATED, INDEPENDENT)

#: Correlation per covariate value used when none is configured.
DEFAULT_RHO = {0: 0.2, 1: 0.8}

_PHI = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


def _finalize(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


def _words(seed: int, stream: int, units: np.ndarray) -> np.ndarray:
    """64-bit hash words for (seed, stream, unit id) triples."""
    with np.errstate(over="ignore"):
        key = _finalize(np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
                        + _PHI * np.uint64(stream + 1))
        return _finalize((units.astype(np.uint64) + np.uint64(1)) * _PHI ^ key)


def _uniform(seed: int, stream: int, units: np.ndarray) -> np.ndarray:
    """Uniforms in the open interval (0, 1), one per unit."""
    w = _words(seed, stream, units)
    return (w >> np.uint64(11)).astype(np.float64) * 2.0 ** -53 + 2.0 ** -54


def _normal(seed: int, stream: int, units: np.ndarray) -> np.ndarray:
    return ndtri(_uniform(seed, stream, units))


def _choice(seed: int, stream: int, units: np.ndarray,
            values: Sequence) -> np.ndarray:
    u = _uniform(seed, stream, units)
    idx = np.minimum((u * len(values)).astype(np.int64), len(values) - 1)
    return np.asarray(values, dtype=np.float64)[idx]


@dataclass(frozen=True)
class GaussianCouplingSpec:
    """Cross-world law of the Gaussian noise copies.

    Whatever the regime, each world's marginal stays standard normal;
    the regime only sets the correlation between the two copies.  For
    the correlated regime, ``rho`` maps covariate values to
    correlations in [-1, 1].
    """

    regime: str
    rho: Optional[Mapping] = None

    def __post_init__(self):
        if self.regime not in REGIMES:
            raise TypeMismatchError(f"unknown regime {self.regime!r}")
        if self.regime == CORRELATED:
            rho = dict(self.rho) if self.rho is not None else dict(DEFAULT_RHO)
            for key, value in rho.items():
                if not -1.0 <= float(value) <= 1.0:
                    raise InvalidRhoError(
                        f"rho for covariate value {key!r} is {value!r}, "
                        f"outside [-1, 1]")
            object.__setattr__(self, "rho", rho)


@dataclass(frozen=True)
class Example2Params:
    """Knobs of the heterogeneous-effect generator."""

    n: int
    p_x0: float = 0.5
    p_x1: float = 0.5
    x2_domain: tuple = (0, 1, 2)
    assignment_prob: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise TypeMismatchError("sample count must be at least 1")
        for name in ("p_x0", "p_x1", "assignment_prob"):
            p = getattr(self, name)
            if not 0.0 <= p <= 1.0:
                raise TypeMismatchError(f"{name} must lie in [0, 1]")
        object.__setattr__(self, "x2_domain", tuple(self.x2_domain))


@dataclass
class CrossWorldSample:
    """One row per unit: covariates plus draws of y under both arms."""

    unit: np.ndarray
    covariates: dict[str, np.ndarray]
    y0: np.ndarray
    y1: np.ndarray

    def __len__(self) -> int:
        return len(self.unit)


@dataclass
class RctTable:
    """Factual trial rows: each unit keeps exactly one arm's draw."""

    unit: np.ndarray
    t: np.ndarray
    y: np.ndarray

    def rows(self) -> list[tuple]:
        return list(zip(self.unit.tolist(), self.t.tolist(), self.y.tolist()))


def _coupled_normals(spec: GaussianCouplingSpec, seed: int,
                     units: np.ndarray, key: np.ndarray,
                     streams: tuple[int, int]) -> tuple[np.ndarray, np.ndarray]:
    """Pairs of standard normals with regime-controlled correlation."""
    za = _normal(seed, streams[0], units)
    if spec.regime == SHARED:
        return za, za.copy()
    zb = _normal(seed, streams[1], units)
    if spec.regime == INDEPENDENT:
        return za, zb
    rho_map = spec.rho or {}
    rho = np.zeros(len(units))
    for value, r in rho_map.items():
        rho = np.where(key == float(value), float(r), rho)
    # 2x2 Cholesky; copy/negate exactly at the degenerate corners.
    e1 = np.where(np.abs(rho) == 1.0, np.sign(rho) * za,
                  rho * za + np.sqrt(np.maximum(1.0 - rho * rho, 0.0)) * zb)
    return za, e1


def sample_cross_world(spec: GaussianCouplingSpec, n: int, seed: int,
                       p_x: float = 0.5) -> CrossWorldSample:
    """Pure-noise cross-world pairs with a single binary covariate x.

    The outcome in each world is just that world's noise copy, so both
    marginals are standard normal and the sample correlation of
    (y0, y1) estimates the coupling correlation directly.
    """
    if n < 1:
        raise TypeMismatchError("sample count must be at least 1")
    units = np.arange(n, dtype=np.uint64)
    x = (_uniform(seed, 0, units) < p_x).astype(np.int64)
    e0, e1 = _coupled_normals(spec, seed, units, x, streams=(1, 2))
    return CrossWorldSample(unit=np.arange(n, dtype=np.int64),
                            covariates={"x": x}, y0=e0, y1=e1)


def gen_example2(params: Example2Params,
                 spec: GaussianCouplingSpec) -> tuple[CrossWorldSample, RctTable]:
    """Heterogeneous-effect generator plus its factual trial table.

    y under arm t is 0.5 * [x0 = 1] * (t + 1) + 0.1 * x2 * e(t), with
    the noise copies e(0), e(1) coupled per regime keyed on x1.  The
    treated-minus-control mean is 0.5 in the x0 = 1 group and 0 in the
    x0 = 0 group; x2 = 0 rows are exactly deterministic given (x0, t).
    """
    n = params.n
    units = np.arange(n, dtype=np.uint64)
    seed = params.seed
    x0 = (_uniform(seed, 0, units) < params.p_x0).astype(np.int64)
    x1 = (_uniform(seed, 1, units) < params.p_x1).astype(np.int64)
    x2 = _choice(seed, 2, units, params.x2_domain)
    e0, e1 = _coupled_normals(spec, seed, units, x1, streams=(3, 4))
    base = 0.5 * (x0 == 1)
    y0 = base * 1.0 + 0.1 * x2 * e0
    y1 = base * 2.0 + 0.1 * x2 * e1
    sample = CrossWorldSample(
        unit=np.arange(n, dtype=np.int64),
        covariates={"x0": x0, "x1": x1, "x2": x2},
        y0=y0, y1=y1)
    rct = rct_table(sample, params.assignment_prob, seed)
    return sample, rct


def rct_table(sample: CrossWorldSample, assignment_prob: float,
              seed: int) -> RctTable:
    """Mask one arm per unit by an independent assignment coin."""
    units = sample.unit.astype(np.uint64)
    t = (_uniform(seed, 5, units) < assignment_prob).astype(np.int64)
    y = np.where(t == 1, sample.y1, sample.y0)
    return RctTable(unit=sample.unit.copy(), t=t, y=y)


@dataclass(frozen=True)
class GroupCorrelation:
    """Pearson correlation of (y0, y1) within one covariate group."""

    count: int
    corr: Optional[float]

    @property
    def defined(self) -> bool:
        return self.corr is not None


def _pearson(y0: np.ndarray, y1: np.ndarray) -> Optional[float]:
    if len(y0) < 2:
        return None
    if np.all(y0 == y0[0]) or np.all(y1 == y1[0]):
        return None
    if np.array_equal(y0, y1):
        # Comonotone identical columns: exactly 1 without float noise.
        return 1.0
    d0 = y0 - y0.mean()
    d1 = y1 - y1.mean()
    return float((d0 * d1).sum()
                 / (np.sqrt((d0 * d0).sum()) * np.sqrt((d1 * d1).sum())))


def estimate_correlation(sample: CrossWorldSample,
                         group_by=None) -> dict:
    """Per-group correlation of the two cross-world outcome columns.

    ``group_by`` is a covariate name, a list of names, or None for one
    global group.  Groups with fewer than two rows or zero variance in
    either column come back undefined (corr None), not as errors.
    """
    if group_by is None:
        keys = [()]
        masks = {(): np.ones(len(sample), dtype=bool)}
    else:
        names = [group_by] if isinstance(group_by, str) else list(group_by)
        for name in names:
            if name not in sample.covariates:
                raise TypeMismatchError(f"unknown covariate {name!r}")
        columns = [np.asarray(sample.covariates[name]) for name in names]
        stacked = np.stack(columns, axis=1)
        uniques = np.unique(stacked, axis=0)
        keys = []
        masks = {}
        for row in uniques:
            key = tuple(row.tolist())
            if len(names) == 1:
                key = key[0]
            mask = np.all(stacked == row, axis=1)
            keys.append(key)
            masks[key] = mask
    out = {}
    for key in keys:
        mask = masks[key]
        out[key] = GroupCorrelation(
            count=int(mask.sum()),
            corr=_pearson(sample.y0[mask], sample.y1[mask]))
    return out


def _fmt(value) -> str:
    if isinstance(value, (np.floating, float)):
        return repr(float(value))
    return str(int(value)) if isinstance(value, (np.integer, int)) else str(value)


def cross_world_csv(sample: CrossWorldSample) -> str:
    """Render a sample as CSV with one covariate column per name."""
    names = sorted(sample.covariates)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["unit", *names, "y0", "y1"])
    columns = [sample.covariates[name] for name in names]
    for i in range(len(sample)):
        writer.writerow([
            int(sample.unit[i]),
            *(_fmt(col[i]) for col in columns),
            _fmt(sample.y0[i]),
            _fmt(sample.y1[i]),
        ])
    return buf.getvalue()


def rct_csv(table: RctTable) -> str:
    """Render a factual trial as CSV rows (unit, t, y)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["unit", "t", "y"])
    for unit, t, y in table.rows():
        writer.writerow([int(unit), int(t), _fmt(y)])
    return buf.getvalue()


def read_cross_world_csv(text: str) -> CrossWorldSample:
    """Parse a cross-world CSV back into a sample."""
    from .errors import BadHeaderError

    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise BadHeaderError("cross-world file is empty")
    header = [h.strip() for h in header]
    if len(header) < 3 or header[0] != "unit" or header[-2:] != ["y0", "y1"]:
        raise BadHeaderError(
            f"expected header unit,<covariates...>,y0,y1, got "
            f"{','.join(header)!r}")
    names = header[1:-2]
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    unit = np.array([int(row[0]) for row in rows], dtype=np.int64)
    covariates = {
        name: np.array([float(row[1 + i]) for row in rows])
        for i, name in enumerate(names)
    }
    y0 = np.array([float(row[-2]) for row in rows])
    y1 = np.array([float(row[-1]) for row in rows])
    return CrossWorldSample(unit=unit, covariates=covariates, y0=y0, y1=y1)
