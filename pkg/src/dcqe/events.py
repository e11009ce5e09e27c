"""Trial-level event logs and Monte Carlo sampling.

A sampled experiment is a sequence of (x, c, d) triples. Logs store index
arrays against an :class:`~dcqe.joint.OutcomeSpace`; labels are materialized
only at the I/O boundary.

Sampling is deterministic given (table, n_trials, seed) and independent of
how the work is batched: trials are produced in fixed-size chunks, each
chunk seeded from the root seed and its own chunk index. Chunk k of a long
run is bit-identical to chunk k of a short one, so logs share prefixes and
chunks may be generated out of order or in parallel without changing the
result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import EmptyLog, InvalidArgument
from .joint import JointDistribution, OutcomeSpace, validate

#: Trials per deterministic sampling chunk. Fixed: changing it changes logs.
CHUNK_TRIALS = 1 << 16


@dataclass(frozen=True)
class EventLog:
    """Immutable record of trials as parallel index arrays."""

    space: OutcomeSpace
    x: np.ndarray
    c_idx: np.ndarray
    d_idx: np.ndarray

    def __post_init__(self):
        arrays = {}
        for name in ("x", "c_idx", "d_idx"):
            arr = np.asarray(getattr(self, name), dtype=np.int64).copy()
            arr.setflags(write=False)
            arrays[name] = arr
        if not (arrays["x"].shape == arrays["c_idx"].shape == arrays["d_idx"].shape):
            raise InvalidArgument("event arrays must have equal length")
        if arrays["x"].ndim != 1:
            raise InvalidArgument("event arrays must be one-dimensional")
        bounds = (self.space.n_x, self.space.n_c, self.space.n_d)
        for (name, arr), bound in zip(arrays.items(), bounds):
            if arr.size and (arr.min() < 0 or arr.max() >= bound):
                raise InvalidArgument(f"{name} index out of range for the outcome space")
        for name, arr in arrays.items():
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return int(self.x.size)

    @property
    def n_events(self) -> int:
        return len(self)

    def records(self) -> Iterator[tuple[int, int, str, str]]:
        """Yield (trial, x, c_label, d_label) rows in trial order."""
        c_values = self.space.c_values
        d_values = self.space.d_values
        for t in range(len(self)):
            yield t, int(self.x[t]), c_values[self.c_idx[t]], d_values[self.d_idx[t]]

    def counts(self) -> np.ndarray:
        """Event counts on the full (n_x, n_c, n_d) grid."""
        shape = self.space.shape
        flat = (self.x * self.space.n_c + self.c_idx) * self.space.n_d + self.d_idx
        return np.bincount(flat, minlength=shape[0] * shape[1] * shape[2]).reshape(shape)


def _chunk_uniforms(seed: int, chunk_index: int) -> np.ndarray:
    ss = np.random.SeedSequence(seed, spawn_key=(chunk_index,))
    rng = np.random.Generator(np.random.PCG64(ss))
    return rng.random(CHUNK_TRIALS)


def sample_events(joint: JointDistribution, n_trials: int, seed: int) -> EventLog:
    """Draw i.i.d. trials from a validated table.

    Each chunk draws a full block of uniforms and inverts the cumulative
    table with a sorted search; partial tail chunks slice the block rather
    than shortening the draw, keeping the prefix property exact.
    """
    validate(joint)
    if n_trials < 1:
        raise InvalidArgument(f"need at least 1 trial, got {n_trials}")
    cdf = np.cumsum(joint.p.reshape(-1))
    cdf[-1] = 1.0
    n_chunks = -(-n_trials // CHUNK_TRIALS)
    pieces = []
    for k in range(n_chunks):
        u = _chunk_uniforms(seed, k)
        take = min(CHUNK_TRIALS, n_trials - k * CHUNK_TRIALS)
        pieces.append(np.searchsorted(cdf, u[:take], side="right"))
    flat = np.concatenate(pieces)
    n_c, n_d = joint.space.n_c, joint.space.n_d
    return EventLog(
        space=joint.space,
        x=flat // (n_c * n_d),
        c_idx=(flat // n_d) % n_c,
        d_idx=flat % n_d,
    )


def estimate_from_events(log: EventLog) -> JointDistribution:
    """Relative-frequency table from a log, tagged with its sample count."""
    if len(log) == 0:
        raise EmptyLog("cannot estimate a distribution from zero events")
    counts = log.counts().astype(float)
    return JointDistribution(log.space, counts / len(log), n_samples=len(log))
