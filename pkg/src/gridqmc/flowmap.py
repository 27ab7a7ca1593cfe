"""Line-flow mapping and its unitarization.

For one line, the weighted Kronecker sum of the bus MW levels gives the
loading value reached by every joint injection state.  Grouping equal
values yields a sparse 0/1 matrix that maps the joint injection state onto
a loading-distribution state.  Row normalization makes the matrix
semi-orthogonal, SVD splits it into two unitaries, and a Householder
reflection folds the chosen risk metric into the amplitude of the all-ones
basis state.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError, FactorizationError
from .injection import EncodedInjection, InjectionDistribution, encode, state_prep_unitary
from .simulator import UnitaryMatrix

#: absolute tolerance for grouping equal loading values
VALUE_GROUP_TOL = 1e-9

_SINGULAR_VALUE_TOL = 1e-6


def kron_sum(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """All pairwise sums, first operand most significant.

    Output index ``i * len(b) + j`` holds ``a[i] + b[j]``, matching the
    ordering of the Kronecker product of the corresponding states.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ConfigurationError("kron_sum operands must be non-empty")
    return np.add.outer(a, b).ravel()


def group_values(values: np.ndarray, tol: float = VALUE_GROUP_TOL) -> tuple[np.ndarray, np.ndarray]:
    """Cluster a value vector into distinct levels within an absolute tolerance.

    Returns (sorted distinct levels, index of each input value's level).
    Values are chained: a new level starts where the sorted gap exceeds tol.
    """
    order = np.argsort(values)
    ordered = values[order]
    boundaries = np.nonzero(np.diff(ordered) > tol)[0]
    starts = np.concatenate(([0], boundaries + 1))
    ends = np.concatenate((boundaries + 1, [len(values)]))
    labels = np.empty(len(values), dtype=int)
    distinct = np.empty(len(starts))
    for k, (s, e) in enumerate(zip(starts, ends)):
        labels[order[s:e]] = k
        distinct[k] = ordered[s:e].mean()
    return distinct, labels


@dataclass(frozen=True)
class LineFlowMap:
    """Sparse 0/1 map from joint injection states to distinct loading levels.

    ``m[k, c] == 1`` iff joint state ``c`` produces the loading level
    ``distinct_values[k]`` (absolute value, fraction of rating).  Every
    column holds exactly one 1; ``row_norms[k]`` is the square root of the
    number of ones in row ``k``.  ``m_sc`` is filled by
    :func:`orthonormalize_rows`.
    """

    line: str
    distinct_values: np.ndarray
    m: np.ndarray
    row_norms: np.ndarray
    m_sc: np.ndarray | None = None

    @property
    def n_rows(self) -> int:
        return len(self.distinct_values)

    @property
    def n_columns(self) -> int:
        return self.m.shape[1]


def build_line_map(
    h_row: np.ndarray,
    distributions: list[InjectionDistribution],
    line: str = "",
) -> LineFlowMap:
    """Enumerate the loading value of every joint state and group equal ones.

    ``h_row`` must be the rated distribution-factor row restricted to the
    non-slack buses, ordered consistently with ``distributions``.  Loading
    signs are folded by absolute value.
    """
    h_row = np.asarray(h_row, dtype=float)
    if len(distributions) == 0:
        raise ConfigurationError("need at least one distribution")
    if len(h_row) != len(distributions):
        raise ConfigurationError("h_row length must match the number of distributions")

    loading = np.array([0.0])
    for h, dist in zip(h_row, distributions):
        loading = kron_sum(loading, h * dist.values_mw)
    loading = np.abs(loading)

    distinct, labels = group_values(loading)
    n_cols = len(loading)
    m = np.zeros((len(distinct), n_cols))
    m[labels, np.arange(n_cols)] = 1.0
    row_norms = np.sqrt(m.sum(axis=1))
    return LineFlowMap(line=line, distinct_values=distinct, m=m, row_norms=row_norms)


def orthonormalize_rows(lf_map: LineFlowMap) -> LineFlowMap:
    """Divide every row by its L2 norm, making the map semi-orthogonal."""
    if np.any(lf_map.row_norms == 0):
        raise ConfigurationError("flow map has a zero row")
    return replace(lf_map, m_sc=lf_map.m / lf_map.row_norms[:, None])


@dataclass(frozen=True)
class UnitaryFactorization:
    """Two unitary factors whose product restores the semi-orthogonal map.

    The left SVD factor is padded to full dimension with an identity block;
    the top ``n_rows`` rows of ``u_padded @ v_h`` equal the orthonormalized
    map.
    """

    v_h: UnitaryMatrix
    u_padded: UnitaryMatrix


def unitary_factorize(lf_map: LineFlowMap) -> UnitaryFactorization:
    """SVD of the orthonormalized map into a pair of unitaries.

    All singular values must equal one (guaranteed by row orthonormality);
    larger deviations signal a malformed map.
    """
    if lf_map.m_sc is None:
        raise ConfigurationError("flow map must be orthonormalized first")
    r, n = lf_map.m_sc.shape
    if n & (n - 1) != 0:
        raise ConfigurationError("column count must be a power of two")
    u, s, v_h = np.linalg.svd(lf_map.m_sc, full_matrices=True)
    if np.max(np.abs(s - 1.0)) > _SINGULAR_VALUE_TOL:
        raise FactorizationError(
            f"singular values deviate from 1 by {np.max(np.abs(s - 1.0)):.2e}"
        )
    u_padded = np.eye(n)
    u_padded[:r, :r] = u
    return UnitaryFactorization(v_h=UnitaryMatrix(v_h), u_padded=UnitaryMatrix(u_padded))


@dataclass(frozen=True)
class EstimatorVector:
    """Weights turning the loading-distribution state into one risk number.

    For the mean metric the weight of each level is the level itself; for
    the overload metric it is an indicator of the level reaching the
    threshold.  Row norms are folded back in so the un-normalized map is
    effectively applied.  ``scaling`` converts the final amplitude into
    physical units.
    """

    metric: str
    threshold: float | None
    v: np.ndarray
    scaling: float

    @property
    def is_degenerate(self) -> bool:
        """True when no level carries weight; the metric is exactly zero."""
        return not np.any(self.v)


def build_estimator_vector(
    lf_map: LineFlowMap,
    metric: str,
    n_qubits: int,
    encodings: list[EncodedInjection],
    threshold: float | None = None,
) -> EstimatorVector:
    """Build the metric weight vector, padded to the full state dimension."""
    dim = 2**n_qubits
    if lf_map.n_columns != dim:
        raise ConfigurationError("flow map does not match the qubit count")
    v = np.zeros(dim)
    if metric == "mean":
        v[: lf_map.n_rows] = lf_map.distinct_values * lf_map.row_norms
    elif metric == "overload":
        if threshold is None:
            raise ConfigurationError("overload metric needs a threshold")
        over = lf_map.distinct_values >= threshold
        v[: lf_map.n_rows] = np.where(over, lf_map.row_norms, 0.0)
    else:
        raise ConfigurationError(f"unknown metric {metric!r}")
    prod_norms = float(np.prod([enc.norm_factor for enc in encodings]))
    scaling = float(np.linalg.norm(v)) * prod_norms
    return EstimatorVector(metric=metric, threshold=threshold, v=v, scaling=scaling)


def householder_unitary(v: np.ndarray) -> UnitaryMatrix:
    """Reflection placing ``v / ||v||`` on the last row and column.

    Symmetric involution; the overlap of any state with the all-ones basis
    state after applying it equals the normalized inner product with ``v``.
    Returns the identity when ``v`` already points along the last axis.
    """
    v = np.asarray(v, dtype=float)
    norm = np.linalg.norm(v)
    if norm == 0:
        raise ConfigurationError("householder vector must be non-zero")
    w = v / norm
    w[-1] -= 1.0
    wnorm2 = float(w @ w)
    if wnorm2 < 1e-24:
        return UnitaryMatrix(np.eye(len(v)))
    return UnitaryMatrix(np.eye(len(v)) - 2.0 * np.outer(w, w) / wnorm2)


@dataclass(frozen=True)
class PipelineUnitary:
    """Composed operator: state prep, flow map factors, then the estimator.

    The amplitude of the all-ones basis state applied to the all-zero input
    is the metric on the amplitude scale; ``scaling`` converts it back to
    physical units.
    """

    a: UnitaryMatrix
    good_state_index: int
    scaling: float


def assemble_pipeline(
    preps: list[UnitaryMatrix],
    factorization: UnitaryFactorization,
    h: UnitaryMatrix,
    scaling: float,
) -> PipelineUnitary:
    """Multiply the stage unitaries into one dense operator."""
    prep = preps[0].entries
    for p in preps[1:]:
        prep = np.kron(prep, p.entries)
    dim = factorization.v_h.dim
    if prep.shape[0] != dim or h.dim != dim:
        raise ConfigurationError("stage dimensions do not match")
    a = h.entries @ factorization.u_padded.entries @ factorization.v_h.entries @ prep
    return PipelineUnitary(a=UnitaryMatrix(a), good_state_index=dim - 1, scaling=scaling)


def build_line_pipeline(
    h_row: np.ndarray,
    distributions: list[InjectionDistribution],
    metric: str,
    threshold: float | None = None,
    line: str = "",
) -> tuple[PipelineUnitary | None, LineFlowMap, EstimatorVector]:
    """Run the full construction for one line and metric.

    Returns ``(pipeline, flow_map, estimator)``; the pipeline is ``None``
    when the estimator is degenerate (metric exactly zero, nothing to
    estimate).
    """
    encodings = [encode(d) for d in distributions]
    n_qubits = sum(enc.n_qubits for enc in encodings)
    lf_map = orthonormalize_rows(build_line_map(h_row, distributions, line=line))
    estimator = build_estimator_vector(lf_map, metric, n_qubits, encodings, threshold)
    if estimator.is_degenerate:
        return None, lf_map, estimator
    factorization = unitary_factorize(lf_map)
    h_unitary = householder_unitary(estimator.v)
    preps = [state_prep_unitary(enc) for enc in encodings]
    pipeline = assemble_pipeline(preps, factorization, h_unitary, estimator.scaling)
    return pipeline, lf_map, estimator
