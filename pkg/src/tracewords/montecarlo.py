"""Monte Carlo sampling of the matrix ensembles and trace statistics.

Random streams: sample ``i`` and letter slot ``j`` (the position of the
letter type in the sorted list of types used by the words) draw from
``Philox(SeedSequence(seed, spawn_key=(i, j)))``.  Each draw is therefore
fixed by ``(seed, i, j)`` alone, and the per-sample values do not depend
on how the sample range is split across workers.  Workers get contiguous
blocks of sample indices; values are stored by index and reduced once at
the end, so results are bit-identical for any worker count.
"""

from __future__ import annotations

import csv
import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import MissingLetterError, NotStarFreeError
from .words import Ensemble, Word, as_word, is_star_free, star


class EnsembleKind(enum.Enum):
    GINIBRE_COMPLEX = "ginibre"
    GINIBRE_REAL = "real"
    GUE = "gue"
    GOE = "goe"
    SPARSE_COMPLEX = "sparse"
    BAND_COMPLEX = "band"


class EntryDist(enum.Enum):
    COMPLEX_GAUSSIAN = "gaussian"
    # Z = exp(i theta) r with r^2 in {0, 2}: E|Z|^2 = 1, E|Z|^4 = 2, phase invariant
    FOURTH_MATCHED = "fourth"


@dataclass(frozen=True)
class EnsembleSpec:
    """How the complex Ginibre letters ``G_i`` are sampled.

    Letters ``R_i``, ``H_i`` and ``S_i`` always come from the real Ginibre,
    GUE and GOE ensembles of the same size.
    """

    kind: EnsembleKind
    N: int
    p: float = 1.0
    dist: EntryDist = EntryDist.COMPLEX_GAUSSIAN
    b: int = 0

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be positive")
        if self.kind is EnsembleKind.SPARSE_COMPLEX:
            if not (0 < self.p <= 1):
                raise ValueError("sparsity p must lie in (0, 1]")
            if self.p * self.N < 1:
                raise ValueError("sparse ensembles need p * N >= 1")
        if self.kind is EnsembleKind.BAND_COMPLEX and self.b < 1:
            raise ValueError("band half-width b must be at least 1")

    @property
    def l(self) -> int:
        return min(2 * self.b + 1, self.N)

    @classmethod
    def parse(cls, text: str, N: int) -> "EnsembleSpec":
        """Read ``ginibre``, ``real``, ``gue``, ``goe``, ``fourth``,
        ``sparse:p=0.1[,dist=fourth]`` or ``band:b=64[,dist=fourth]``.

        ``p`` may also be written ``p=N^-0.5``.
        """
        name, _, rest = text.strip().partition(":")
        opts = {}
        for item in filter(None, rest.split(",")):
            key, eq, value = item.partition("=")
            if not eq:
                raise ValueError(f"bad ensemble option {item!r}")
            opts[key.strip()] = value.strip()
        dist = EntryDist(opts.pop("dist", "gaussian"))
        name = name.lower()
        if name == "fourth":
            return cls(EnsembleKind.SPARSE_COMPLEX, N, 1.0, EntryDist.FOURTH_MATCHED)
        kind = EnsembleKind(name)
        p, b = 1.0, 0
        if "p" in opts:
            raw = opts.pop("p")
            p = N ** float(raw[2:]) if raw.startswith("N^") else float(raw)
        if "b" in opts:
            b = int(opts.pop("b"))
        if opts:
            raise ValueError(f"unknown ensemble options {sorted(opts)}")
        return cls(kind, N, p, dist, b)

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "N": self.N, "p": self.p, "dist": self.dist.value, "b": self.b}


@dataclass(frozen=True)
class MCConfig:
    samples: int
    seed: int = 0
    workers: int = field(default_factory=lambda: int(os.environ.get("TRACEWORDS_WORKERS", "1")))

    def __post_init__(self):
        if self.samples < 2:
            raise ValueError("need at least two samples for standard errors")
        if self.workers < 1:
            raise ValueError("workers must be positive")


@dataclass(frozen=True)
class MomentEstimate:
    mean: complex
    stderr: float
    samples: int

    def z_score(self, target: complex) -> float:
        if self.stderr == 0:
            return 0.0 if self.mean == target else math.inf
        return abs(self.mean - target) / self.stderr

    def to_json(self) -> dict:
        return {
            "mean_re": self.mean.real,
            "mean_im": self.mean.imag,
            "stderr": self.stderr,
            "samples": self.samples,
        }


def estimate(values: np.ndarray) -> MomentEstimate:
    """Sample mean and its standard error, ``sqrt(sum |x - mean|^2 / (n (n-1)))``."""
    values = np.asarray(values)
    n = values.shape[0]
    mean = values.mean()
    var = np.sum(np.abs(values - mean) ** 2) / (n - 1)
    return MomentEstimate(complex(mean), float(math.sqrt(var / n)), int(n))


# ---------------------------------------------------------------------------
# sampling


def rng_for(seed: int, sample: int, slot: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(sample, slot))))


def _entries(rng: np.random.Generator, shape, dist: EntryDist, scale: float = 1.0) -> np.ndarray:
    """Complex entries with ``E|z|^2 = scale^2``."""
    n = int(np.prod(shape))
    if dist is EntryDist.COMPLEX_GAUSSIAN:
        # interleaved (re, im) pairs viewed as complex128
        z = rng.standard_normal(2 * n)
        z *= scale / math.sqrt(2)
        return z.view(np.complex128).reshape(shape)
    theta = rng.uniform(0.0, 2 * math.pi, n)
    r = np.where(rng.random(n) < 0.5, 0.0, scale * math.sqrt(2))
    return (r * np.exp(1j * theta)).reshape(shape)


@lru_cache(maxsize=4)
def _band_mask(N: int, b: int) -> np.ndarray:
    i = np.arange(N)
    d = np.abs(i[:, None] - i[None, :])
    return np.minimum(d, N - d) <= b


def sample_matrix(spec: EnsembleSpec, rng: np.random.Generator) -> np.ndarray:
    """One ``N x N`` draw; real ensembles come back as float arrays."""
    N = spec.N
    kind = spec.kind
    if kind is EnsembleKind.GINIBRE_COMPLEX:
        return _entries(rng, (N, N), EntryDist.COMPLEX_GAUSSIAN, 1 / math.sqrt(N))
    if kind is EnsembleKind.GINIBRE_REAL:
        x = rng.standard_normal((N, N))
        x *= 1 / math.sqrt(N)
        return x
    if kind is EnsembleKind.GUE:
        a = _entries(rng, (N, N), EntryDist.COMPLEX_GAUSSIAN, 1 / math.sqrt(2 * N))
        return a + a.conj().T
    if kind is EnsembleKind.GOE:
        x = rng.standard_normal((N, N))
        x *= 1 / math.sqrt(2 * N)
        return x + x.T
    if kind is EnsembleKind.SPARSE_COMPLEX:
        z = _entries(rng, (N, N), spec.dist, 1 / math.sqrt(N * spec.p))
        if spec.p < 1:
            z *= rng.random((N, N)) < spec.p
        return z
    z = _entries(rng, (N, N), spec.dist, 1 / math.sqrt(spec.l))
    z *= _band_mask(N, spec.b)
    return z


def _spec_for(letter_type: tuple[Ensemble, int], spec: EnsembleSpec) -> EnsembleSpec:
    ens = letter_type[0]
    if ens is Ensemble.GINIBRE_COMPLEX:
        return spec
    kind = {
        Ensemble.GINIBRE_REAL: EnsembleKind.GINIBRE_REAL,
        Ensemble.GUE: EnsembleKind.GUE,
        Ensemble.GOE: EnsembleKind.GOE,
    }[ens]
    return EnsembleSpec(kind, spec.N)


def letter_types(words: Iterable[Word]) -> list[tuple[Ensemble, int]]:
    types = {letter.type for w in words for letter in w}
    order = list(Ensemble)
    return sorted(types, key=lambda t: (order.index(t[0]), t[1]))


def sample_letters(words: Sequence[Word], spec: EnsembleSpec, seed: int, sample: int) -> dict:
    """Independent matrices for every letter type used by ``words``."""
    return {
        t: sample_matrix(_spec_for(t, spec), rng_for(seed, sample, slot))
        for slot, t in enumerate(letter_types(words))
    }


def _letter_matrix(letter, samples: dict) -> np.ndarray:
    try:
        mat = samples[letter.type]
    except KeyError:
        raise MissingLetterError(f"no sample for letter {letter}") from None
    if letter.transposed:
        mat = mat.T
    if letter.conjugated:
        mat = mat.conj()
    return mat


def evaluate_word(w, samples: dict) -> np.ndarray:
    """The ordered product of the letter matrices of ``w``.

    ``samples`` maps ``(Ensemble, index)`` to a matrix; repeated letters
    reuse the same matrix.
    """
    w = as_word(w)
    out = _letter_matrix(w[0], samples)
    for letter in w.letters[1:]:
        out = out @ _letter_matrix(letter, samples)
    return out


def trace_of_word(w: Word, samples: dict) -> complex:
    """``Tr`` of the word product, saving the last multiplication."""
    if len(w) == 1:
        return complex(np.trace(_letter_matrix(w[0], samples)))
    head = evaluate_word(Word(w.letters[:-1]), samples)
    last = _letter_matrix(w[-1], samples)
    return complex(np.sum(head * last.T))


def _run(n_samples: int, workers: int, fn: Callable[[int], np.ndarray], width: int) -> np.ndarray:
    """Evaluate ``fn(i)`` for every sample index into a ``(n, width)`` array."""
    out = np.empty((n_samples, width), dtype=complex)

    def block(lo: int, hi: int):
        for i in range(lo, hi):
            out[i] = fn(i)

    if workers <= 1:
        block(0, n_samples)
        return out
    bounds = np.linspace(0, n_samples, workers + 1).astype(int)
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(block, int(lo), int(hi)) for lo, hi in zip(bounds[:-1], bounds[1:])]
        for f in futures:
            f.result()
    return out


def _words(words) -> list[Word]:
    if isinstance(words, (Word, str)):
        words = [words]
    return [as_word(w) for w in words]


def trace_samples(words, spec: EnsembleSpec, cfg: MCConfig) -> np.ndarray:
    """Per-sample traces, shape ``(samples, len(words))``."""
    words = _words(words)

    def one(i):
        mats = sample_letters(words, spec, cfg.seed, i)
        return np.array([trace_of_word(w, mats) for w in words])

    return _run(cfg.samples, cfg.workers, one, len(words))


def trace_moment_estimate(words, spec: EnsembleSpec, cfg: MCConfig) -> MomentEstimate:
    """Estimate of ``E[prod Tr w_j]`` from independent draws."""
    traces = trace_samples(words, spec, cfg)
    return estimate(np.prod(traces, axis=1))


# ---------------------------------------------------------------------------
# covariance of centered traces


@dataclass(frozen=True)
class CovarianceEstimate:
    """Empirical covariance of ``(Re T, Im T)`` with jackknife standard errors."""

    cov: np.ndarray
    stderr: np.ndarray
    mean: complex
    samples: int
    shift: int

    def z_scores(self, target) -> np.ndarray:
        target = np.asarray(target, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(self.stderr > 0, np.abs(self.cov - target) / self.stderr, np.inf)

    def to_json(self) -> dict:
        return {
            "cov": self.cov.tolist(),
            "stderr": self.stderr.tolist(),
            "mean_re": self.mean.real,
            "mean_im": self.mean.imag,
            "samples": self.samples,
            "shift": self.shift,
        }


def _cov2(x: np.ndarray) -> np.ndarray:
    return np.cov(np.stack([x.real, x.imag]), ddof=1)


def jackknife_cov(values: np.ndarray, blocks: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Covariance of ``(Re, Im)`` and delete-one-block jackknife errors."""
    values = np.asarray(values)
    n = len(values)
    blocks = max(2, min(blocks, n))
    edges = np.linspace(0, n, blocks + 1).astype(int)
    reps = []
    for lo, hi in zip(edges[:-1], edges[1:]):
        keep = np.concatenate([values[:lo], values[hi:]])
        reps.append(_cov2(keep))
    reps = np.array(reps)
    err = np.sqrt((blocks - 1) / blocks * np.sum((reps - reps.mean(axis=0)) ** 2, axis=0))
    return _cov2(values), err


def centered_trace_covariance(w, spec: EnsembleSpec, cfg: MCConfig, shift: int | None = None) -> CovarianceEstimate:
    """Covariance of ``T = Tr(G_w) - shift * N``; ``shift`` defaults to the CLT centering."""
    w = as_word(w)
    if shift is None:
        from .limits import clt_params

        shift = clt_params(w).shift
    t = trace_samples([w], spec, cfg)[:, 0] - shift * spec.N
    cov, err = jackknife_cov(t)
    return CovarianceEstimate(cov, err, complex(t.mean()), cfg.samples, shift)


# ---------------------------------------------------------------------------
# star-free statistics


def _require_star_free(w: Word) -> None:
    if not is_star_free(w):
        raise NotStarFreeError(f"{w} is not star-free")


def _trace_powers(m: np.ndarray, kmax: int) -> list[complex]:
    """``Tr(m^k)`` for ``k = 1..kmax`` using ``Tr(AB) = sum(A * B^T)``."""
    powers = [None, m]
    for k in range(2, (kmax + 1) // 2 + 1):
        powers.append(powers[-1] @ m)
    out = []
    for k in range(1, kmax + 1):
        if k == 1:
            out.append(complex(np.trace(m)))
        else:
            hi, lo = (k + 1) // 2, k // 2
            out.append(complex(np.sum(powers[hi] * powers[lo].T)))
    return out


def squared_singular_moments(w, ks: Sequence[int], spec: EnsembleSpec, cfg: MCConfig) -> dict[int, MomentEstimate]:
    """Estimates of ``(1/N) Tr((W W*)^k)`` for each ``k`` in ``ks``, from shared draws."""
    w = as_word(w)
    _require_star_free(w)
    ks = sorted(set(int(k) for k in ks))
    if not ks or ks[0] < 1:
        raise ValueError("powers must be positive")
    kmax = ks[-1]

    def one(i):
        mats = sample_letters([w], spec, cfg.seed, i)
        W = evaluate_word(w, mats)
        M = W @ W.conj().T
        tr = _trace_powers(M, kmax)
        return np.array([tr[k - 1] for k in ks]) / spec.N

    vals = _run(cfg.samples, cfg.workers, one, len(ks))
    return {k: estimate(vals[:, j].real) for j, k in enumerate(ks)}


def squared_singular_moment(w, k: int, spec: EnsembleSpec, cfg: MCConfig) -> MomentEstimate:
    return squared_singular_moments(w, [k], spec, cfg)[k]


@dataclass(frozen=True)
class JointTraceEstimate:
    second_moments: dict  # j -> estimate of E|Tr W^j|^2
    cross_moments: dict  # (i, j) -> estimate of E[Tr W^i conj(Tr W^j)]


def joint_trace_samples(w, kmax: int, spec: EnsembleSpec, cfg: MCConfig) -> JointTraceEstimate:
    """Second moments and cross moments of ``Tr(G_w^j)``, ``j = 1..kmax``."""
    w = as_word(w)
    _require_star_free(w)
    if kmax < 1:
        raise ValueError("kmax must be positive")

    def one(i):
        mats = sample_letters([w], spec, cfg.seed, i)
        W = evaluate_word(w, mats)
        out, P = [], W
        for j in range(1, kmax + 1):
            if j > 1:
                P = P @ W
            out.append(np.trace(P))
        return np.array(out)

    t = _run(cfg.samples, cfg.workers, one, kmax)
    second = {j: estimate(np.abs(t[:, j - 1]) ** 2) for j in range(1, kmax + 1)}
    cross = {
        (i, j): estimate(t[:, i - 1] * t[:, j - 1].conj())
        for i in range(1, kmax + 1)
        for j in range(1, kmax + 1)
        if i != j
    }
    return JointTraceEstimate(second, cross)


def write_trace_csv(path, traces: np.ndarray) -> None:
    """Write one row per sample with columns ``sample, re, im``."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sample", "re", "im"])
        for i, t in enumerate(np.asarray(traces).ravel()):
            writer.writerow([i, repr(float(t.real)), repr(float(t.imag))])
