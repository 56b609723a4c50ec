"""
Result tables and comparison reports, with their CSV encodings.

CSV headers are fixed:

    results.csv  source,k,mse_mean,mse_stderr,ser_mean,ser_stderr,alpha_star,beta_star,particles,trials
    cdf.csv      k,grid_point,cdf_empirical,cdf_predicted

Floats are written with ``repr`` (shortest round-trip form) and a missing
value is an empty cell, so reading a written table gives back an equal table.
"""

import csv
import io
import math
from dataclasses import dataclass, field, fields
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Union

RESULT_COLUMNS = [
    'source', 'k', 'mse_mean', 'mse_stderr', 'ser_mean', 'ser_stderr',
    'alpha_star', 'beta_star', 'particles', 'trials',
]
CDF_COLUMNS = ['k', 'grid_point', 'cdf_empirical', 'cdf_predicted']

PathLike = Union[str, Path]


# ============================================================================
# ENUMS
# ============================================================================

class Source(str, Enum):
    """Origin of a result row."""
    EMPIRICAL = "empirical"    # ADMM averaged over trials
    PREDICTION = "prediction"  # particle state evolution
    OPTIMIZER = "optimizer"    # long-horizon ADMM reference
    FAILED = "failed"          # marker appended when a run stops early


# ============================================================================
# CELL CODECS
# ============================================================================

def _format_float(value: Optional[float]) -> str:
    if value is None:
        return ''
    return repr(float(value))


def _format_int(value: Optional[int]) -> str:
    return '' if value is None else str(int(value))


def _parse_float(cell: str) -> Optional[float]:
    return float(cell) if cell != '' else None


def _parse_int(cell: str) -> Optional[int]:
    return int(cell) if cell != '' else None


# ============================================================================
# RESULT TABLE
# ============================================================================

@dataclass
class ResultRow:
    """
    One (source, k) row.

    Empirical rows carry trial statistics; prediction rows carry the saddle
    point and the particle count instead of standard errors.
    """
    source: Source
    k: int
    mse_mean: Optional[float] = None
    mse_stderr: Optional[float] = None
    ser_mean: Optional[float] = None
    ser_stderr: Optional[float] = None
    alpha_star: Optional[float] = None
    beta_star: Optional[float] = None
    particles: Optional[int] = None
    trials: Optional[int] = None

    @classmethod
    def from_dict(cls, data: Dict[str, str]) -> 'ResultRow':
        """Create from a CSV record"""
        return cls(
            source=Source(data['source']),
            k=int(data['k']),
            mse_mean=_parse_float(data.get('mse_mean', '')),
            mse_stderr=_parse_float(data.get('mse_stderr', '')),
            ser_mean=_parse_float(data.get('ser_mean', '')),
            ser_stderr=_parse_float(data.get('ser_stderr', '')),
            alpha_star=_parse_float(data.get('alpha_star', '')),
            beta_star=_parse_float(data.get('beta_star', '')),
            particles=_parse_int(data.get('particles', '')),
            trials=_parse_int(data.get('trials', '')),
        )

    def to_dict(self) -> Dict[str, str]:
        """Convert to a CSV record"""
        return {
            'source': self.source.value,
            'k': str(self.k),
            'mse_mean': _format_float(self.mse_mean),
            'mse_stderr': _format_float(self.mse_stderr),
            'ser_mean': _format_float(self.ser_mean),
            'ser_stderr': _format_float(self.ser_stderr),
            'alpha_star': _format_float(self.alpha_star),
            'beta_star': _format_float(self.beta_star),
            'particles': _format_int(self.particles),
            'trials': _format_int(self.trials),
        }


@dataclass
class ResultTable:
    """Rows of one experiment, in write order."""
    rows: List[ResultRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    def by_source(self, source: Union[str, Source]) -> List[ResultRow]:
        source = Source(source)
        return [row for row in self.rows if row.source == source]

    def has_source(self, source: Union[str, Source]) -> bool:
        return bool(self.by_source(source))

    @property
    def failed(self) -> bool:
        return self.has_source(Source.FAILED)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=RESULT_COLUMNS, lineterminator='\n')
        writer.writeheader()
        for row in self.rows:
            writer.writerow(row.to_dict())
        return buffer.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> 'ResultTable':
        reader = csv.DictReader(io.StringIO(text))
        return cls(rows=[ResultRow.from_dict(record) for record in reader])

    def write(self, path: PathLike) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_csv(), encoding='utf-8')
        return path

    @classmethod
    def read(cls, path: PathLike) -> 'ResultTable':
        return cls.from_csv(Path(path).read_text(encoding='utf-8'))


# ============================================================================
# CDF TABLE
# ============================================================================

@dataclass
class CdfRow:
    """Empirical and predicted CDF at one grid point of iteration k."""
    k: int
    grid_point: float
    cdf_empirical: float
    cdf_predicted: float

    @classmethod
    def from_dict(cls, data: Dict[str, str]) -> 'CdfRow':
        return cls(
            k=int(data['k']),
            grid_point=float(data['grid_point']),
            cdf_empirical=float(data['cdf_empirical']),
            cdf_predicted=float(data['cdf_predicted']),
        )

    def to_dict(self) -> Dict[str, str]:
        return {
            'k': str(self.k),
            'grid_point': repr(float(self.grid_point)),
            'cdf_empirical': repr(float(self.cdf_empirical)),
            'cdf_predicted': repr(float(self.cdf_predicted)),
        }


@dataclass
class CdfTable:
    rows: List[CdfRow] = field(default_factory=list)

    @property
    def iterations(self) -> List[int]:
        return sorted({row.k for row in self.rows})

    def ks_distance(self, k: int) -> float:
        """Largest CDF gap over the grid at iteration k."""
        gaps = [abs(r.cdf_empirical - r.cdf_predicted) for r in self.rows if r.k == k]
        if not gaps:
            raise KeyError(f"No CDF rows for k={k}")
        return max(gaps)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CDF_COLUMNS, lineterminator='\n')
        writer.writeheader()
        for row in self.rows:
            writer.writerow(row.to_dict())
        return buffer.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> 'CdfTable':
        return cls(rows=[CdfRow.from_dict(r) for r in csv.DictReader(io.StringIO(text))])

    def write(self, path: PathLike) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(self.to_csv(), encoding='utf-8')
        return path

    @classmethod
    def read(cls, path: PathLike) -> 'CdfTable':
        return cls.from_csv(Path(path).read_text(encoding='utf-8'))


# ============================================================================
# COMPARISON REPORT
# ============================================================================

@dataclass(frozen=True)
class Tolerances:
    """
    Agreement thresholds between empirical and predicted rows.

    Attributes:
        mse_db: Largest allowed |10 log10(mse_emp / mse_pred)|. None reports
            the MSE gap without letting it decide the verdict.
        ser_abs: Largest allowed |ser_emp - ser_pred|.
        ks: Largest allowed CDF gap.
        from_k: First iteration that is checked.
    """
    mse_db: Optional[float] = 1.0
    ser_abs: float = 0.01
    ks: float = 0.05
    from_k: int = 1


@dataclass
class IterationGap:
    k: int
    mse_gap_db: Optional[float] = None
    mse_gap_rel: Optional[float] = None
    ser_gap: Optional[float] = None
    passed: bool = True


@dataclass
class ComparisonReport:
    """Per-iteration gaps and the overall verdict."""
    tolerances: Tolerances
    gaps: List[IterationGap] = field(default_factory=list)
    ks_distances: Dict[int, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(g.passed for g in self.gaps) and all(
            d <= self.tolerances.ks for d in self.ks_distances.values()
        )

    @property
    def worst_mse_gap_db(self) -> Optional[float]:
        values = [abs(g.mse_gap_db) for g in self.gaps if g.mse_gap_db is not None]
        return max(values) if values else None

    @property
    def worst_ser_gap(self) -> Optional[float]:
        values = [g.ser_gap for g in self.gaps if g.ser_gap is not None]
        return max(values) if values else None

    def to_dict(self) -> Dict[str, Any]:
        return {
            'passed': self.passed,
            'tolerances': {f.name: getattr(self.tolerances, f.name) for f in fields(self.tolerances)},
            'worst_mse_gap_db': self.worst_mse_gap_db,
            'worst_ser_gap': self.worst_ser_gap,
            'ks_distances': {str(k): v for k, v in self.ks_distances.items()},
            'failing_iterations': [g.k for g in self.gaps if not g.passed],
        }

    def summary_lines(self) -> Iterable[str]:
        verdict = 'PASS' if self.passed else 'FAIL'
        yield f"verdict: {verdict}"
        if self.worst_mse_gap_db is not None:
            tol = "not checked" if self.tolerances.mse_db is None else f"tol {self.tolerances.mse_db} dB"
            yield f"worst MSE gap: {self.worst_mse_gap_db:.3f} dB ({tol})"
        if self.worst_ser_gap is not None:
            yield f"worst SER gap: {self.worst_ser_gap:.4f} (tol {self.tolerances.ser_abs})"
        for k, distance in sorted(self.ks_distances.items()):
            yield f"KS distance k={k}: {distance:.4f} (tol {self.tolerances.ks})"


def db_gap(empirical: float, predicted: float) -> float:
    """10 log10(empirical / predicted); +-inf when exactly one side is zero."""
    if empirical == predicted:
        return 0.0
    if empirical <= 0 or predicted <= 0:
        return math.inf if empirical > predicted else -math.inf
    return 10.0 * math.log10(empirical / predicted)
