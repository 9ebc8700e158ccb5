"""Principal component analysis via a one-sided Jacobi SVD.

The matrices here are tiny (at most a few dozen rows by 23 columns), so the
decomposition is written directly on Python floats: cyclic sweeps of plane
rotations orthogonalize the column set of the centered data matrix, which
yields the singular values, the row scores, and the loading directions
without any linear-algebra dependency. Results are bit-reproducible, which
the golden-file tests rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import ConvergenceError, ValidationError
from .motifs import MotifMatrix

_JACOBI_TOL = 1e-12
_MAX_SWEEPS = 100


@dataclass
class PcaResult:
    """Retained principal components of a column-centered matrix."""

    scores: list[list[float]]  # rows x k
    loadings: list[list[float]]  # cols x k
    singular_values: list[float]  # length k, nonincreasing
    explained_ratio: list[float]
    cumulative_ratio: list[float]
    k: int


def _center_columns(values: list[list[float]]) -> list[list[float]]:
    n = len(values)
    m = len(values[0])
    means = [sum(row[j] for row in values) / n for j in range(m)]
    return [[row[j] - means[j] for j in range(m)] for row in values]


def _standardize_columns(values: list[list[float]]) -> list[list[float]]:
    # Sample standard deviation on already-centered columns; constant
    # columns are left untouched.
    n = len(values)
    m = len(values[0])
    out = [list(row) for row in values]
    for j in range(m):
        var = sum(row[j] * row[j] for row in values) / (n - 1)
        sd = math.sqrt(var)
        if sd > 0.0:
            for row in out:
                row[j] /= sd
    return out


def _jacobi_orthogonalize(cols: list[list[float]]) -> tuple[list[list[float]], list[list[float]]]:
    """Rotate column pairs until all are mutually orthogonal.

    Returns the rotated columns W and the accumulated rotation V (as
    columns), so that original = W @ V^T. Convergence means the largest
    normalized off-diagonal column product fell below 1e-12.
    """
    m = len(cols)
    w = [list(c) for c in cols]
    v = [[1.0 if i == j else 0.0 for i in range(m)] for j in range(m)]

    # Columns whose squared norm falls this far below the total are
    # numerically zero; skipping them avoids churning on rounding noise.
    total = sum(x * x for col in cols for x in col)
    floor = total * 1e-30

    for _ in range(_MAX_SWEEPS):
        off = 0.0
        for p in range(m - 1):
            for q in range(p + 1, m):
                wp, wq = w[p], w[q]
                alpha = sum(x * x for x in wp)
                beta = sum(x * x for x in wq)
                gamma = sum(x * y for x, y in zip(wp, wq))
                if alpha <= floor or beta <= floor:
                    continue
                rel = abs(gamma) / (math.sqrt(alpha) * math.sqrt(beta))
                off = max(off, rel)
                if rel <= _JACOBI_TOL:
                    continue
                zeta = (beta - alpha) / (2.0 * gamma)
                t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                w[p] = [c * x - s * y for x, y in zip(wp, wq)]
                w[q] = [s * x + c * y for x, y in zip(wp, wq)]
                vp, vq = v[p], v[q]
                v[p] = [c * x - s * y for x, y in zip(vp, vq)]
                v[q] = [s * x + c * y for x, y in zip(vp, vq)]
        if off <= _JACOBI_TOL:
            return w, v
    raise ConvergenceError(f"Jacobi sweep limit ({_MAX_SWEEPS}) reached without convergence")


def pca(matrix: MotifMatrix, k: int = 2, standardize: bool = False) -> PcaResult:
    """Principal components of a relative-frequency matrix.

    The matrix columns are centered internally (and optionally scaled to
    unit sample variance). Scores are the left singular vectors scaled by
    the singular values; loadings are the right singular vectors. Each
    loading column is sign-fixed so its largest-magnitude entry is
    non-negative. ``explained_ratio`` is per-component variance over total
    variance; ``cumulative_ratio`` its running sum.
    """
    n = len(matrix.values)
    m = len(matrix.col_labels)
    if n < 2:
        raise ValidationError(f"PCA needs at least 2 rows, got {n}")
    max_k = min(n - 1, m)
    if not 1 <= k <= max_k:
        raise ValidationError(f"k={k} out of range 1..{max_k} for a {n}x{m} matrix")

    centered = _center_columns(matrix.values)
    if standardize:
        centered = _standardize_columns(centered)

    cols = [[centered[r][j] for r in range(n)] for j in range(m)]
    w, v = _jacobi_orthogonalize(cols)

    norms = [math.sqrt(sum(x * x for x in col)) for col in w]
    order = sorted(range(m), key=lambda j: -norms[j])
    total = sum(x * x for x in norms)

    scores = [[0.0] * k for _ in range(n)]
    loadings = [[0.0] * k for _ in range(m)]
    singular_values = []
    explained = []
    for out_j, j in enumerate(order[:k]):
        load_col = v[j]
        score_col = w[j]
        peak = max(range(m), key=lambda i: (abs(load_col[i]), -i))
        if load_col[peak] < 0.0:
            load_col = [-x for x in load_col]
            score_col = [-x for x in score_col]
        for r in range(n):
            scores[r][out_j] = score_col[r]
        for i in range(m):
            loadings[i][out_j] = load_col[i]
        sigma = norms[j]
        singular_values.append(sigma)
        explained.append(sigma * sigma / total if total > 0.0 else 0.0)

    cumulative = []
    running = 0.0
    for ratio in explained:
        running += ratio
        cumulative.append(running)

    return PcaResult(
        scores=scores,
        loadings=loadings,
        singular_values=singular_values,
        explained_ratio=explained,
        cumulative_ratio=cumulative,
        k=k,
    )


def biplot_coordinates(
    result: PcaResult, loading_scale: float | None = None
) -> tuple[list[tuple[float, float]], list[tuple[float, float]]]:
    """First-two-component row points and scaled variable arrows.

    When ``loading_scale`` is None, the scale is chosen so the longest
    arrow reaches 80% of the score cloud's radius.
    """
    if result.k < 2:
        raise ValidationError("biplot needs at least 2 retained components")
    points = [(row[0], row[1]) for row in result.scores]
    raw_arrows = [(row[0], row[1]) for row in result.loadings]
    if loading_scale is None:
        radius = max((math.hypot(x, y) for x, y in points), default=0.0)
        longest = max((math.hypot(x, y) for x, y in raw_arrows), default=0.0)
        loading_scale = 0.8 * radius / longest if radius > 0.0 and longest > 0.0 else 1.0
    arrows = [(x * loading_scale, y * loading_scale) for x, y in raw_arrows]
    return points, arrows


def _fmt(x: float) -> str:
    return format(x, ".12g")


def scores_to_csv(result: PcaResult, row_labels: list[str]) -> str:
    header = "," + ",".join(f"PC{i + 1}" for i in range(result.k))
    lines = [header]
    for label, row in zip(row_labels, result.scores):
        lines.append(label + "," + ",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def loadings_to_csv(result: PcaResult, col_labels: list[str]) -> str:
    header = "," + ",".join(f"PC{i + 1}" for i in range(result.k))
    lines = [header]
    for label, row in zip(col_labels, result.loadings):
        lines.append(label + "," + ",".join(_fmt(x) for x in row))
    return "\n".join(lines) + "\n"


def ratios_to_csv(result: PcaResult) -> str:
    lines = [",singular_value,explained_ratio,cumulative_ratio"]
    for i in range(result.k):
        lines.append(
            f"PC{i + 1},"
            + ",".join(
                _fmt(x)
                for x in (
                    result.singular_values[i],
                    result.explained_ratio[i],
                    result.cumulative_ratio[i],
                )
            )
        )
    return "\n".join(lines) + "\n"


def scores_from_csv(text: str) -> tuple[list[str], list[list[float]]]:
    lines = [line for line in text.splitlines() if line]
    labels = []
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        labels.append(parts[0])
        rows.append([float(x) for x in parts[1:]])
    return labels, rows
