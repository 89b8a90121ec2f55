"""Exact enumeration of the composition lattice after N fragmentation stages.

After N stages every leaf stick is identified by a weak composition
(k1, ..., km) of N: its length is p1^k1 * ... * pm^km and the number of
leaves sharing it is the multinomial coefficient N!/(k1!...km!).  This module
streams the compositions in a fixed order, evaluates log-multinomial weights,
and aggregates the exact weighted distribution of fractional parts of
log-lengths without materializing the m^N sticks.

All mass arithmetic happens in log space: for N=1000 the raw masses are far
below the double-precision underflow threshold, so masses are exponentiated
only after subtracting the running maximum.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from .errors import ResourceLimitError
from .model import ProportionVector

MEASURE_UNIFORM = "uniform"  # each of the m^N leaf sticks counts once
MEASURE_LENGTH = "length"    # each leaf weighted by its length
MEASURES = (MEASURE_UNIFORM, MEASURE_LENGTH)

MERGE_TOL = 1e-12
DEFAULT_CAP = 10**8
_CHUNK_ROWS = 1 << 17


class Composition(NamedTuple):
    """A weak composition k of N into m non-negative parts."""

    k: tuple[int, ...]
    N: int


@dataclass(frozen=True)
class WeightedMod1Distribution:
    """Atomic probability distribution on [0, 1).

    residues are sorted ascending with neighbours more than the merge
    tolerance apart; masses are nonnegative and sum to 1 (within 1e-10).
    """

    residues: np.ndarray
    masses: np.ndarray
    measure: str
    N: int
    m: int

    def __post_init__(self):
        r, w = self.residues, self.masses
        if r.shape != w.shape or r.ndim != 1 or len(r) == 0:
            raise ValueError("residues and masses must be equal-length 1-d arrays")
        if r[0] < 0.0 or r[-1] >= 1.0 or np.any(np.diff(r) <= 0):
            raise ValueError("residues must be strictly ascending inside [0, 1)")
        if np.any(w < 0.0):
            raise ValueError("masses must be nonnegative")
        total = float(w.sum())
        if abs(total - 1.0) > 1e-10:
            raise ValueError(f"masses sum to {total!r}, not 1 within 1e-10")
        if self.measure not in MEASURES:
            raise ValueError(f"unknown measure {self.measure!r}")
        r.flags.writeable = False
        w.flags.writeable = False

    @property
    def atoms(self) -> int:
        return len(self.residues)

    def total_mass(self) -> float:
        return float(self.masses.sum())


def _frac(x):
    """Fractional part mapped into [0, 1); values within MERGE_TOL of 1 snap to 0."""
    r = x - np.floor(x)
    if np.isscalar(r) or r.ndim == 0:
        return 0.0 if (1.0 - r) <= MERGE_TOL else float(r)
    r[(1.0 - r) <= MERGE_TOL] = 0.0
    return r


def _kahan_columns(K: np.ndarray, coeffs: Sequence[float]) -> np.ndarray:
    """Compensated row-wise dot product of integer matrix K with coeffs."""
    acc = np.zeros(len(K))
    comp = np.zeros(len(K))
    for j, c in enumerate(coeffs):
        y = K[:, j] * c - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
    return acc


def _kahan_scalar(ks: Sequence[int], coeffs: Sequence[float]) -> float:
    acc = 0.0
    comp = 0.0
    for kj, c in zip(ks, coeffs):
        y = kj * c - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
    return acc


def composition_count(N: int, m: int) -> int:
    return math.comb(N + m - 1, m - 1)


def compositions(N: int, m: int) -> Iterator[Composition]:
    """Stream every weak composition of N into m parts exactly once.

    Order is part of the external contract: first components descending,
    i.e. (N,0,...,0), (N-1,1,0,...), ... ending at (0,...,0,N).  The
    successor is computed in place, so memory per step is constant.
    """
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    if N < 0:
        raise ValueError(f"need N >= 0, got {N}")
    k = [N] + [0] * (m - 1)
    while True:
        yield Composition(tuple(k), N)
        i = m - 2
        while i >= 0 and k[i] == 0:
            i -= 1
        if i < 0:
            return
        tail = sum(k[i + 1:])
        k[i] -= 1
        k[i + 1] = tail + 1
        for j in range(i + 2, m):
            k[j] = 0


def composition_array(N: int, m: int) -> np.ndarray:
    """All weak compositions as an int64 array, rows in compositions() order."""
    if m < 2:
        raise ValueError(f"need m >= 2, got {m}")
    if N < 0:
        raise ValueError(f"need N >= 0, got {N}")

    def rows(n: int, parts: int) -> np.ndarray:
        if parts == 1:
            return np.array([[n]], dtype=np.int64)
        blocks = []
        for first in range(n, -1, -1):
            sub = rows(n - first, parts - 1)
            blocks.append(np.hstack([np.full((len(sub), 1), first, dtype=np.int64), sub]))
        return np.vstack(blocks)

    return rows(N, m)


def log_multinomial(N: int, k: Composition | Sequence[int]) -> float:
    """Natural log of the multinomial coefficient N!/(k1!...km!)."""
    counts = k.k if isinstance(k, Composition) else tuple(int(x) for x in k)
    if any(c < 0 for c in counts) or sum(counts) != N:
        raise ValueError(f"{counts} is not a composition of {N}")
    total = math.lgamma(N + 1)
    for c in counts:
        total -= math.lgamma(c + 1)
    return total


def atom_for(
    model: ProportionVector, k: Composition | Sequence[int], base: int = 10
) -> tuple[float, float, float]:
    """One composition's atom: (residue, log_mass_uniform, log_mass_length).

    residue is the fractional part of sum k_j * log_base(p_j), accumulated
    with compensated summation.  Uniform mass divides the multinomial count
    by m^N; length mass multiplies it by the leaf length.
    """
    counts = k.k if isinstance(k, Composition) else tuple(int(x) for x in k)
    if len(counts) != model.m:
        raise ValueError(f"composition has {len(counts)} parts, model has {model.m}")
    N = sum(counts)
    logmult = log_multinomial(N, counts)
    if base == 10:
        logp_base = [math.log10(p) for p in model.p]
    else:
        lb = math.log(base)
        logp_base = [math.log(p) / lb for p in model.p]
    logp_nat = [math.log(p) for p in model.p]
    residue = _frac(_kahan_scalar(counts, logp_base))
    log_mass_uniform = logmult - N * math.log(model.m)
    log_mass_length = logmult + _kahan_scalar(counts, logp_nat)
    return residue, log_mass_uniform, log_mass_length


def _merge_atoms(
    residues: np.ndarray, weights: np.ndarray, merge_tol: float = MERGE_TOL
) -> tuple[np.ndarray, np.ndarray]:
    """Sort atoms and merge residues closer than merge_tol (chained).

    The merged residue is the plain mean of the cluster: it stays inside the
    cluster's span, so representatives of distinct clusters keep their order.
    """
    order = np.argsort(residues, kind="stable")
    r = residues[order]
    w = weights[order]
    boundary = np.empty(len(r), dtype=bool)
    boundary[0] = True
    np.greater(np.diff(r), merge_tol, out=boundary[1:])
    cid = np.cumsum(boundary) - 1
    n_clusters = int(cid[-1]) + 1
    if n_clusters <= 4096:
        # few big clusters: per-cluster pairwise sums keep roundoff ~eps*log(n)
        starts = np.flatnonzero(boundary)
        ends = np.append(starts[1:], len(r))
        mass = np.array([w[a:b].sum() for a, b in zip(starts, ends)])
        rep = np.array([r[a:b].sum() for a, b in zip(starts, ends)]) / (ends - starts)
    else:
        mass = np.bincount(cid, weights=w, minlength=n_clusters)
        counts = np.bincount(cid, minlength=n_clusters)
        rep = np.bincount(cid, weights=r, minlength=n_clusters) / counts
    return rep, mass


def build_distribution(
    residues: np.ndarray,
    masses: np.ndarray,
    measure: str,
    N: int,
    m: int,
    merge_tol: float = MERGE_TOL,
) -> WeightedMod1Distribution:
    """Merge raw atoms into a validated WeightedMod1Distribution."""
    rep, mass = _merge_atoms(residues, masses, merge_tol)
    return WeightedMod1Distribution(rep, mass, measure, N, m)


def distribution_from_residues(
    residues: np.ndarray, measure: str, N: int, m: int
) -> WeightedMod1Distribution:
    """Equal-weight empirical distribution from raw residue samples."""
    n = len(residues)
    if n == 0:
        raise ValueError("need at least one residue")
    r = _frac(np.asarray(residues, dtype=float))
    return build_distribution(r, np.full(n, 1.0 / n), measure, N, m)


def _atom_table(K: np.ndarray, model: ProportionVector, base: int, measure: str) -> tuple[np.ndarray, np.ndarray]:
    """(residues, log-masses) for a block of composition rows.

    Elementwise arithmetic matches atom_for exactly: the same lgamma values,
    the same compensated-summation order.
    """
    N = int(K[0].sum())
    m = K.shape[1]
    lgt = np.array([math.lgamma(i + 1) for i in range(N + 1)])
    logmult = lgt[N] - lgt[K].sum(axis=1)
    if base == 10:
        logp_base = [math.log10(p) for p in model.p]
    else:
        lb = math.log(base)
        logp_base = [math.log(p) / lb for p in model.p]
    residues = _frac(_kahan_columns(K, logp_base))
    if measure == MEASURE_UNIFORM:
        logmass = logmult - N * math.log(m)
    else:
        logmass = logmult + _kahan_columns(K, [math.log(p) for p in model.p])
    return residues, logmass


def exact_distribution(
    model: ProportionVector,
    N: int,
    base: int = 10,
    measure: str = MEASURE_UNIFORM,
    cap: int = DEFAULT_CAP,
    threads: int = 1,
) -> WeightedMod1Distribution:
    """Exact weighted mod-1 distribution of log stick lengths after N stages.

    Aggregates every composition's atom.  Masses are accumulated in log space
    and exponentiated relative to the largest atom, then merged within the
    residue tolerance.  Refuses when the composition count exceeds cap.

    threads > 1 splits the composition table into fixed-size chunks whose
    per-chunk arithmetic is elementwise, so the result is byte-identical to
    the single-threaded (canonical) run.
    """
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}")
    if N < 0:
        raise ValueError(f"need N >= 0, got {N}")
    if threads < 1:
        raise ValueError("threads must be >= 1")
    total = composition_count(N, model.m)
    if total > cap:
        raise ResourceLimitError(
            f"C({N + model.m - 1},{model.m - 1}) = {total} compositions exceeds cap {cap}"
        )
    K = composition_array(N, model.m)
    chunks = [K[i:i + _CHUNK_ROWS] for i in range(0, len(K), _CHUNK_ROWS)]
    if threads == 1 or len(chunks) == 1:
        parts = [_atom_table(c, model, base, measure) for c in chunks]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda c: _atom_table(c, model, base, measure), chunks))
    residues = np.concatenate([p[0] for p in parts])
    logmass = np.concatenate([p[1] for p in parts])
    peak = float(logmass.max())
    scaled = np.exp(logmass - peak)
    rep, mass = _merge_atoms(residues, scaled)
    if peak != 0.0:  # undo the peak shift; total returns to 1 up to roundoff
        mass = mass * math.exp(peak)
    return WeightedMod1Distribution(rep, mass, measure, N, model.m)


def rotate_distribution(dist: WeightedMod1Distribution, shift: float) -> WeightedMod1Distribution:
    """Rotate every residue by shift mod 1 (a global rescaling of lengths)."""
    rotated = _frac(dist.residues + shift)
    return build_distribution(rotated, dist.masses.copy(), dist.measure, dist.N, dist.m)


def write_distribution_csv(dist: WeightedMod1Distribution, path: str | Path) -> None:
    """Dump atoms as 'residue,mass' rows sorted by residue, 17 significant digits."""
    lines = ["residue,mass"]
    for r, w in zip(dist.residues, dist.masses):
        lines.append(f"{r:.17g},{w:.17g}")
    Path(path).write_text("\n".join(lines) + "\n")
