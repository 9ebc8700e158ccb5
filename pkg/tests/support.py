"""Shared test helpers: random generators and independent oracles.

The oracles here deliberately avoid the library's own code paths: the
co-occurrence oracle is a naive double loop, the PCA oracles go through an
eigendecomposition of the Gram matrix (closed-form for 3x3, LAPACK via
numpy for the sweeps). Expected values asserted in the tests either come
from these or from the hand-tallied fixture manifest.
"""

from __future__ import annotations

import math
import random

from animaltales.extraction import Mention, MentionTable

MOTIF_LETTERS = "ABCDEFGHJKLMNPQRSTUVWXZ"

_WORDS = (
    "the a old young gray hungry clever foolish river forest village miller "
    "farmer hunter night morning winter road bridge feast trick reward tail "
    "voice stone tree water fire basket rope honey bread cheese"
).split()

_TITLE_WORDS = (
    "Fox Wolf Bear Hare Crane Feast Trick Winter Journey Bridge Miller "
    "Hunter Reward Quarrel Race Contest"
).split()


def random_motif_token(rng: random.Random) -> str:
    letter = rng.choice(MOTIF_LETTERS)
    major = rng.randint(1, 2999)
    style = rng.random()
    if style < 0.25:
        depth = rng.randint(1, 2)
        sub = ".".join(str(rng.randint(0, 9)) for _ in range(depth))
        return f"{letter}{major}.{sub}"
    if style < 0.4:
        return f"{letter}{major}-{major + rng.randint(0, 500)}"
    return f"{letter}{major}"


def random_catalogue_text(rng: random.Random) -> str:
    """One random catalogue file in exactly the canonical serialized form."""
    count = rng.randint(1, 20)
    numbers = rng.sample(range(1, 300), count)
    records = []
    for number in numbers:
        variant = rng.choice([None, None, None, "A", "B", "C", "D*"])
        tale_id = f"{number}{variant or ''}"
        title = " ".join(rng.choice(_TITLE_WORDS) for _ in range(rng.randint(2, 5)))
        lines = [f"ATU {tale_id} — {title}"]
        if rng.random() < 0.1:
            lines.append(f"See ATU {rng.randint(1, 299)}.")
        else:
            for _ in range(rng.randint(1, 3)):
                words = [rng.choice(_WORDS) for _ in range(rng.randint(4, 10))]
                if rng.random() < 0.7:
                    words.insert(rng.randrange(len(words) + 1), random_motif_token(rng))
                lines.append(" ".join(words) + ".")
        if rng.random() < 0.3:
            for name in ("Combinations", "Remarks", "Literature"):
                if rng.random() < 0.4:
                    lines.append(f"{name}: " + " ".join(rng.choice(_WORDS) for _ in range(4)) + ".")
        records.append("\n".join(lines))
    return "\n\n".join(records) + "\n"


_ANIMALS = ("fox", "wolf", "bear", "hare", "goat", "crane")


def random_mention_table(rng: random.Random) -> MentionTable:
    """A random small mention table whose substitutions respect the per-tale
    pair bound (each unordered pair at most once per tale)."""
    tale_count = rng.randint(0, 10)
    animal_pool = _ANIMALS[: rng.randint(1, 6)]
    mentions = []
    per_tale_sets = {}
    substitution_pairs = {}
    for t in range(tale_count):
        tid = str(t + 1)
        names = rng.sample(animal_pool, rng.randint(0, len(animal_pool)))
        if not names:
            continue
        per_tale_sets[tid] = set(names)
        for i, name in enumerate(sorted(names)):
            mentions.append(
                Mention(
                    tale_id=tid,
                    lemma=name,
                    canonical=name,
                    token_index=i,
                    in_parenthetical=False,
                )
            )
        pairs = [
            (a, b)
            for i, a in enumerate(sorted(names))
            for b in sorted(names)[i + 1 :]
        ]
        chosen = [p for p in pairs if rng.random() < 0.3]
        if chosen:
            substitution_pairs[tid] = chosen
    counts = {}
    for m in mentions:
        counts[m.canonical] = counts.get(m.canonical, 0) + 1
    return MentionTable(
        mentions=mentions,
        per_tale_sets=per_tale_sets,
        substitution_pairs=substitution_pairs,
        counts=counts,
    )


def naive_cooccurrence(table: MentionTable) -> dict[tuple[str, str], int]:
    """Double-loop oracle: pair presence per tale minus substitution counts."""
    animals = sorted({name for names in table.per_tale_sets.values() for name in names})
    weights = {}
    for i, a in enumerate(animals):
        for b in animals[i + 1 :]:
            w = 0
            for names in table.per_tale_sets.values():
                if a in names and b in names:
                    w += 1
            for pairs in table.substitution_pairs.values():
                w -= sum(1 for p in pairs if tuple(sorted(p)) == (a, b))
            if w != 0 or any(
                tuple(sorted(p)) == (a, b)
                for pairs in table.substitution_pairs.values()
                for p in pairs
            ):
                weights[(a, b)] = w
    return weights


def center(matrix: list[list[float]]) -> list[list[float]]:
    n = len(matrix)
    m = len(matrix[0])
    means = [sum(row[j] for row in matrix) / n for j in range(m)]
    return [[row[j] - means[j] for j in range(m)] for row in matrix]


def gram_eig_singular_values(matrix: list[list[float]]) -> list[float]:
    """Oracle singular values: eigenvalues of the centered Gram matrix.

    Uses numpy's dense symmetric eigendecomposition, an algorithm family
    (tridiagonalization + QR) independent of the one-sided Jacobi under test.
    Squaring costs precision near zero: eigenvalue noise ~1e-15 turns into
    sigma noise ~3e-8, so use this only where singular values are not tiny.
    """
    import numpy as np

    a = np.array(center(matrix), dtype=float)
    gram = a.T @ a
    eigenvalues = np.linalg.eigvalsh(gram)
    sigmas = np.sqrt(np.clip(eigenvalues, 0.0, None))
    return sorted((float(s) for s in sigmas), reverse=True)


def augmented_eig_singular_values(matrix: list[list[float]]) -> list[float]:
    """Oracle singular values via the symmetric matrix [[0, A], [A^T, 0]].

    Its eigenvalues are exactly +/- the singular values of the centered A,
    so near-zero singular values stay accurate to ~1e-15 (no squaring).
    """
    import numpy as np

    a = np.array(center(matrix), dtype=float)
    n, m = a.shape
    augmented = np.zeros((n + m, n + m))
    augmented[:n, n:] = a
    augmented[n:, :n] = a.T
    eigenvalues = np.linalg.eigvalsh(augmented)
    positive = sorted((float(v) for v in eigenvalues), reverse=True)
    return positive[: min(n, m)]


def gram_eig_components(matrix: list[list[float]]):
    """Oracle loadings and scores from the Gram-matrix eigendecomposition."""
    import numpy as np

    a = np.array(center(matrix), dtype=float)
    gram = a.T @ a
    eigenvalues, vectors = np.linalg.eigh(gram)
    order = np.argsort(eigenvalues)[::-1]
    loadings = vectors[:, order]
    scores = a @ loadings
    sigmas = np.sqrt(np.clip(eigenvalues[order], 0.0, None))
    return sigmas, scores, loadings


def symmetric_3x3_eigenvalues(g: list[list[float]]) -> list[float]:
    """Closed-form eigenvalues of a symmetric 3x3 matrix (trigonometric method)."""
    p1 = g[0][1] ** 2 + g[0][2] ** 2 + g[1][2] ** 2
    if p1 == 0.0:
        return sorted((g[0][0], g[1][1], g[2][2]), reverse=True)
    q = (g[0][0] + g[1][1] + g[2][2]) / 3.0
    p2 = (g[0][0] - q) ** 2 + (g[1][1] - q) ** 2 + (g[2][2] - q) ** 2 + 2.0 * p1
    p = math.sqrt(p2 / 6.0)
    b = [[(g[i][j] - (q if i == j else 0.0)) / p for j in range(3)] for i in range(3)]
    det_b = (
        b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0])
    )
    r = max(-1.0, min(1.0, det_b / 2.0))
    phi = math.acos(r) / 3.0
    eig1 = q + 2.0 * p * math.cos(phi)
    eig3 = q + 2.0 * p * math.cos(phi + 2.0 * math.pi / 3.0)
    eig2 = 3.0 * q - eig1 - eig3
    return sorted((eig1, eig2, eig3), reverse=True)


def singular_values_3xN_oracle(matrix: list[list[float]]) -> list[float]:
    """Closed-form oracle for matrices with exactly 3 columns."""
    a = center(matrix)
    gram = [[sum(row[i] * row[j] for row in a) for j in range(3)] for i in range(3)]
    return [math.sqrt(max(ev, 0.0)) for ev in symmetric_3x3_eigenvalues(gram)]
