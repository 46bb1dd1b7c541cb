"""Instance generators with exact, construction-guaranteed conflict counts.

Two kinds of instances live here:

* controlled random instances (``gen_planted``, ``gen_far_matching``,
  ``gen_far_star``, ``gen_valid``) used for accuracy and separation
  experiments, and
* the reduction gadgets behind the space lower bounds (INDEX gadgets for the
  VA / VAdeg estimation and separation bounds, and the disjoint-cliques
  instance for random order).

Bit indices ``j`` are 0-based.  Color ids are 1-based.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from .errors import ConstructionError, ParameterError
from .graph_core import ColoredGraph, HardInstance

# batch size for rejection sampling of vertex pairs
_BATCH = 4096


def _bits(X: str | Sequence[int]) -> tuple[int, ...]:
    if isinstance(X, str):
        X = X.strip()
        if any(ch not in "01" for ch in X):
            raise ParameterError(f"bit-string may only contain 0/1, got {X!r}")
        return tuple(int(ch) for ch in X)
    bits = tuple(int(b) for b in X)
    if any(b not in (0, 1) for b in bits):
        raise ParameterError("bit-string entries must be 0 or 1")
    return bits


def _check_index(j: int, N: int) -> None:
    if not 0 <= j < N:
        raise ParameterError(f"index j={j} out of range [0, {N})")


def _pair_key(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


def _sample_cross_pairs(
    rng: np.random.Generator,
    colors: np.ndarray,
    count: int,
    taken: set[tuple[int, int]],
) -> list[tuple[int, int]]:
    """``count`` new vertex pairs with different colors, avoiding ``taken``."""
    n = colors.size
    if count <= 0:
        return []
    sizes = np.bincount(colors)
    same = int(sum(int(s) * (int(s) - 1) // 2 for s in sizes))
    cross_taken = sum(1 for u, v in taken if colors[u] != colors[v])
    available = n * (n - 1) // 2 - same - cross_taken
    if count > available:
        raise ConstructionError(f"need {count} properly colored edges, only {available} pairs left")
    out: list[tuple[int, int]] = []
    if 2 * count > available:
        # dense request: enumerate the candidates instead of rejecting
        cand = [
            (u, v)
            for u in range(n)
            for v in range(u + 1, n)
            if colors[u] != colors[v] and (u, v) not in taken
        ]
        idx = rng.choice(len(cand), size=count, replace=False)
        out = [cand[i] for i in sorted(idx.tolist())]
        taken.update(out)
        return out
    while len(out) < count:
        us = rng.integers(0, n, size=_BATCH)
        vs = rng.integers(0, n, size=_BATCH)
        for u, v in zip(us.tolist(), vs.tolist()):
            if u == v or colors[u] == colors[v]:
                continue
            key = _pair_key(u, v)
            if key in taken:
                continue
            taken.add(key)
            out.append(key)
            if len(out) == count:
                break
    return out


def _sample_same_color_pairs(
    rng: np.random.Generator,
    colors: np.ndarray,
    count: int,
    taken: set[tuple[int, int]],
) -> list[tuple[int, int]]:
    """``count`` new vertex pairs whose endpoints share a color."""
    if count <= 0:
        return []
    classes = [np.flatnonzero(colors == c) for c in range(int(colors.max()) + 1)]
    pair_counts = np.array([len(c) * (len(c) - 1) // 2 for c in classes], dtype=float)
    available = int(pair_counts.sum()) - sum(1 for u, v in taken if colors[u] == colors[v])
    if count > available:
        raise ConstructionError(
            f"target of {count} monochromatic edges exceeds the {available} same-color pairs"
        )
    out: list[tuple[int, int]] = []
    if 2 * count > available:
        cand = [
            (int(a), int(b))
            for cls in classes
            for i, a in enumerate(cls)
            for b in cls[i + 1:]
            if (int(a), int(b)) not in taken
        ]
        idx = rng.choice(len(cand), size=count, replace=False)
        out = [cand[i] for i in sorted(idx.tolist())]
        taken.update(out)
        return out
    weights = pair_counts / pair_counts.sum()
    while len(out) < count:
        picks = rng.choice(len(classes), size=_BATCH, p=weights)
        for c in picks.tolist():
            cls = classes[c]
            a, b = rng.integers(0, len(cls), size=2).tolist()
            if a == b:
                continue
            key = _pair_key(int(cls[a]), int(cls[b]))
            if key in taken:
                continue
            taken.add(key)
            out.append(key)
            if len(out) == count:
                break
    return out


def gen_erdos_renyi(n: int, p: float, color_count: int, seed: int) -> HardInstance:
    """G(n, p) with a uniform random coloring, wrapped with its oracle count."""
    from .graph_core import exact_monochromatic_count, random_colored_graph

    g = random_colored_graph(n, p, color_count, seed)
    return HardInstance(
        g,
        exact_monochromatic_count(g),
        "erdos-renyi",
        {"n": n, "p": p, "color_count": color_count, "seed": seed},
    )


def gen_planted(
    n: int,
    avg_degree: float,
    color_count: int,
    target_monochromatic: int,
    seed: int,
) -> HardInstance:
    """Random graph with exactly ``target_monochromatic`` conflicting edges.

    Vertices get uniform random colors; ``round(n * avg_degree / 2)`` edges are
    drawn in total, of which ``target_monochromatic`` join same-colored pairs
    and the rest join differently colored pairs.  If the target alone exceeds
    the edge budget, the graph consists of the planted edges only.
    """
    if n < 2 or color_count < 1 or avg_degree < 0 or target_monochromatic < 0:
        raise ParameterError("need n >= 2, color_count >= 1, avg_degree >= 0, target >= 0")
    if color_count == 1 and round(n * avg_degree / 2) > target_monochromatic:
        raise ConstructionError("a single color cannot carry properly colored edges")
    rng = np.random.default_rng(seed)
    colors = rng.integers(1, color_count + 1, size=n)
    taken: set[tuple[int, int]] = set()
    mono = _sample_same_color_pairs(rng, colors, target_monochromatic, taken)
    base_count = max(0, round(n * avg_degree / 2) - target_monochromatic)
    base = _sample_cross_pairs(rng, colors, base_count, taken)
    g = ColoredGraph.from_edges(n, mono + base, colors.tolist(), color_count)
    return HardInstance(
        g,
        target_monochromatic,
        "planted",
        {
            "n": n,
            "avg_degree": avg_degree,
            "color_count": color_count,
            "target_monochromatic": target_monochromatic,
            "seed": seed,
        },
    )


def _padding_clique(start: int, m_extra: int, first_color: int) -> tuple[list[tuple[int, int]], list[int]]:
    """Clique on ceil(sqrt(m_extra)) vertices, every vertex its own fresh color."""
    k = math.isqrt(m_extra)
    if k * k < m_extra:
        k += 1
    verts = list(range(start, start + k))
    edges = [(verts[a], verts[b]) for a in range(k) for b in range(a + 1, k)]
    return edges, [first_color + i for i in range(k)]


def gen_index_va(
    X: str | Sequence[int],
    j: int,
    n: int,
    T: int,
    m: int | None = None,
) -> HardInstance:
    """INDEX gadget for the VA estimation lower bound.

    For ``T <= n/2``: one vertex ``p_i`` per bit (``N = n - T``) and an
    independent set ``Q`` of ``T`` vertices joined to ``p_j``.  For ``T > n/2``:
    one independent block of ``floor(2T/n)`` vertices per bit
    (``N = floor(n^2/T)``) and ``|Q| = floor(n/2)``.  Bit-1 positions and ``Q``
    share color 1, bit-0 positions get color 2.  The achieved conflict count
    is recorded as ``parameters["T_achieved"]``.

    If ``m`` exceeds the achieved count, a clique on ``ceil(sqrt(m - T'))``
    vertices with pairwise distinct fresh colors is appended; it adds edges
    but no conflicts.
    """
    bits = _bits(X)
    if n < 2 or T < 1:
        raise ParameterError("need n >= 2 and T >= 1")
    if 2 * T <= n:
        regime, N, block, q = "T<=n/2", n - T, 1, T
    else:
        if T > n * (n - 1) // 2:
            raise ParameterError(f"T={T} exceeds n choose 2")
        regime, N, block, q = "T>n/2", (n * n) // T, (2 * T) // n, n // 2
    if len(bits) != N:
        raise ParameterError(f"regime {regime} needs a bit-string of length N={N}, got {len(bits)}")
    _check_index(j, N)
    C1, C0 = 1, 2
    colors: list[int] = []
    for b in bits:
        colors.extend([C1 if b else C0] * block)
    q_start = len(colors)
    colors.extend([C1] * q)
    pj = range(j * block, (j + 1) * block)
    edges = [(p, q_start + i) for p in pj for i in range(q)]
    T_achieved = block * q
    params = {"X": "".join(map(str, bits)), "j": j, "n": n, "T": T, "N": N,
              "regime": regime, "block_size": block, "Q_size": q, "T_achieved": T_achieved}
    color_count = 2
    if m is not None and m > T_achieved:
        pad_edges, pad_colors = _padding_clique(len(colors), m - T_achieved, 3)
        edges += pad_edges
        colors += pad_colors
        color_count = 2 + len(pad_colors)
        params.update(m=m, padding_vertices=len(pad_colors))
    g = ColoredGraph.from_edges(len(colors), edges, colors, color_count)
    return HardInstance(g, T_achieved if bits[j] else 0, "index-va", params)


def gen_index_vadeg(X: str | Sequence[int], j: int, n: int, m: int, T: int) -> HardInstance:
    """INDEX gadget for the VAdeg estimation lower bound.

    Position ``i`` is colored ``C_{i1}`` (id ``2i+1``) when ``X_i = 1`` and
    ``C_{i0}`` (id ``2i+2``) otherwise; ``Q`` takes ``C_{j1}`` and is joined to
    every Alice vertex, so the degree sequence does not depend on ``X``.

    ``m > nT``: ``N = n - T`` single vertices and ``|Q| = T``.
    ``m <= nT``: ``N = floor(m/T)`` blocks of ``floor(2nT/m)`` vertices and
    ``|Q| = floor(m/2n)``.
    """
    bits = _bits(X)
    if n < 2 or T < 1 or m < 1:
        raise ParameterError("need n >= 2, T >= 1, m >= 1")
    if m > n * T:
        if T >= n:
            raise ParameterError(f"regime m > nT needs T < n (n={n}, T={T})")
        regime, N, block, q = "m>nT", n - T, 1, T
    else:
        regime, N, block, q = "m<=nT", m // T, (2 * n * T) // m, m // (2 * n)
        if N < 1 or block < 1 or q < 1:
            raise ParameterError(
                f"regime m<=nT degenerates for n={n}, m={m}, T={T} "
                f"(N={N}, block={block}, |Q|={q})"
            )
    if len(bits) != N:
        raise ParameterError(f"regime {regime} needs a bit-string of length N={N}, got {len(bits)}")
    _check_index(j, N)
    colors: list[int] = []
    for i, b in enumerate(bits):
        colors.extend([2 * i + 1 if b else 2 * i + 2] * block)
    alice = len(colors)
    colors.extend([2 * j + 1] * q)
    edges = [(p, alice + i) for p in range(alice) for i in range(q)]
    T_achieved = block * q
    g = ColoredGraph.from_edges(len(colors), edges, colors, 2 * N)
    params = {"X": "".join(map(str, bits)), "j": j, "n": n, "m": m, "T": T, "N": N,
              "regime": regime, "block_size": block, "Q_size": q, "T_achieved": T_achieved}
    return HardInstance(g, T_achieved if bits[j] else 0, "index-vadeg", params)


def gen_index_sep(X: str | Sequence[int], j: int, k: int, variant: str) -> HardInstance:
    """Bipartite INDEX gadget for the separation lower bounds.

    Each bit ``i`` owns independent sets ``L_i`` and ``R_i`` of size ``k``
    (vertices ``2ik .. 2ik+k-1`` and ``2ik+k .. 2(i+1)k-1``).  ``L_i`` gets
    color 1 (``C_1``) for ``X_i = 1`` and color 2 (``C_0``) otherwise.

    ``variant="va"``: every ``R_i`` is ``C_1``; only ``L_j x R_j`` is joined.
    ``variant="vadeg"``: ``R_j`` is ``C_1``, the other ``R_i`` are ``C_2``
    (color 3), and every ``L_i x R_i`` is joined.
    """
    bits = _bits(X)
    M = len(bits)
    if k < 1 or M < 1:
        raise ParameterError("need k >= 1 and a non-empty bit-string")
    _check_index(j, M)
    if variant not in ("va", "vadeg"):
        raise ParameterError(f"variant must be 'va' or 'vadeg', got {variant!r}")
    C1, C0, C2 = 1, 2, 3
    colors: list[int] = []
    edges: list[tuple[int, int]] = []
    for i, b in enumerate(bits):
        base = 2 * i * k
        colors.extend([C1 if b else C0] * k)
        if variant == "va":
            colors.extend([C1] * k)
        else:
            colors.extend([C1 if i == j else C2] * k)
        if variant == "vadeg" or i == j:
            edges.extend((base + a, base + k + b_) for a in range(k) for b_ in range(k))
    g = ColoredGraph.from_edges(len(colors), edges, colors, 3)
    params = {"X": "".join(map(str, bits)), "j": j, "k": k, "M": M, "variant": variant}
    return HardInstance(g, k * k if bits[j] else 0, f"index-sep-{variant}", params)


def gen_disjointness_cliques(M: Sequence[Sequence[int]] | np.ndarray, T: int) -> HardInstance:
    """Vertex-disjoint cliques, one per column of a ``sqrt(T) x cols`` 0/1 matrix.

    Vertex ``v_ij`` (row ``i``, column ``j``) is vertex ``j*sqrt(T) + i``.  It
    is colored ``C_*`` (id 1) when ``M[i][j] = 1`` and ``C_i`` (id ``i+2``)
    otherwise.  The matrix must satisfy the unique-intersection promise.
    """
    r = math.isqrt(T) if T >= 0 else -1
    if T < 1 or r * r != T:
        raise ParameterError(f"T={T} must be a positive perfect square")
    mat = np.asarray(M, dtype=int)
    if mat.ndim != 2 or mat.shape[0] != r or mat.shape[1] < 1:
        raise ParameterError(f"matrix must have shape ({r}, cols>=1), got {mat.shape}")
    if not np.isin(mat, (0, 1)).all():
        raise ParameterError("matrix entries must be 0 or 1")
    weights = mat.sum(axis=0)
    full = int((weights == r).sum())
    if r == 1:
        full = int((weights == 1).sum())
        if full > 1:
            raise ParameterError("unique-intersection promise violated: several all-ones columns")
    elif full > 1 or ((weights > 1) & (weights < r)).any():
        raise ParameterError("unique-intersection promise violated")
    cols = mat.shape[1]
    colors = [1 if mat[i, j] else i + 2 for j in range(cols) for i in range(r)]
    edges = [
        (j * r + a, j * r + b) for j in range(cols) for a in range(r) for b in range(a + 1, r)
    ]
    g = ColoredGraph.from_edges(r * cols, edges, colors, r + 1)
    truth = r * (r - 1) // 2 if full else 0
    return HardInstance(g, truth, "disjointness-cliques",
                        {"T": T, "rows": r, "cols": cols, "all_ones_column": bool(full)})


def _with_cross_edges(
    name: str,
    rng: np.random.Generator,
    n: int,
    colors: np.ndarray,
    mono: list[tuple[int, int]],
    m: int,
    params: dict,
) -> HardInstance:
    taken = set(mono)
    base = _sample_cross_pairs(rng, colors, m - len(mono), taken)
    g = ColoredGraph.from_edges(n, mono + base, colors.tolist(), int(colors.max()))
    return HardInstance(g, len(mono), name, params)


def gen_valid(n: int, m: int, color_count: int, seed: int) -> HardInstance:
    """Properly colored random graph with ``m`` edges."""
    if n < 2 or m < 0 or color_count < 2:
        raise ParameterError("need n >= 2, m >= 0, color_count >= 2")
    rng = np.random.default_rng(seed)
    colors = rng.integers(1, color_count + 1, size=n)
    return _with_cross_edges("valid", rng, n, colors, [], m,
                             {"n": n, "m": m, "color_count": color_count, "seed": seed})


def gen_far_matching(n: int, m: int, epsilon: float, color_count: int, seed: int) -> HardInstance:
    """``m`` edges of which ``ceil(eps*m)`` form a monochromatic matching."""
    k = math.ceil(epsilon * m)
    if not 0 < epsilon <= 1 or 2 * k > n or color_count < 2:
        raise ParameterError(f"need 0 < eps <= 1, 2*ceil(eps*m) <= n and >= 2 colors (k={k}, n={n})")
    rng = np.random.default_rng(seed)
    colors = rng.integers(1, color_count + 1, size=n)
    verts = rng.permutation(n)[: 2 * k].tolist()
    mono = []
    for a, b in zip(verts[0::2], verts[1::2]):
        colors[b] = colors[a]
        mono.append(_pair_key(a, b))
    return _with_cross_edges("far-matching", rng, n, colors, mono, m,
                             {"n": n, "m": m, "epsilon": epsilon, "color_count": color_count,
                              "seed": seed, "matching_size": k})


def gen_far_star(n: int, m: int, epsilon: float, color_count: int, seed: int) -> HardInstance:
    """``m`` edges of which ``ceil(eps*m)`` form one monochromatic star."""
    k = math.ceil(epsilon * m)
    if not 0 < epsilon <= 1 or k + 1 > n or color_count < 2:
        raise ParameterError(f"need 0 < eps <= 1, ceil(eps*m) < n and >= 2 colors (k={k}, n={n})")
    rng = np.random.default_rng(seed)
    colors = rng.integers(1, color_count + 1, size=n)
    perm = rng.permutation(n).tolist()
    hub, leaves = perm[0], perm[1: k + 1]
    colors[leaves] = colors[hub]
    mono = [_pair_key(hub, leaf) for leaf in leaves]
    return _with_cross_edges("far-star", rng, n, colors, mono, m,
                             {"n": n, "m": m, "epsilon": epsilon, "color_count": color_count,
                              "seed": seed, "star_degree": k, "hub": hub})
