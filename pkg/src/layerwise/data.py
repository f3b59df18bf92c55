"""Dataset loading, splitting, and synthetic fixtures.

Samples live in matrix columns throughout: a dataset of N samples with n
input features and m targets is stored as an n x N input matrix and an
m x N target matrix. CSV files use the transposed layout (one row per
sample, inputs first, targets last).
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import ParseError, ShapeError, TooFewSamples
from .linalg import as_matrix

LINEAR = "linear"
NONLINEAR = "nonlinear"
SYNTHETIC_KINDS = (LINEAR, NONLINEAR)


@dataclass(frozen=True)
class Dataset:
    inputs: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        x = as_matrix(self.inputs)
        t = as_matrix(self.targets)
        if x.shape[1] != t.shape[1]:
            raise ShapeError(f"{x.shape[1]} input columns vs {t.shape[1]} target columns")
        if x.shape[1] < 1:
            raise ShapeError("dataset needs at least one sample")
        object.__setattr__(self, "inputs", x)
        object.__setattr__(self, "targets", t)

    @property
    def n_inputs(self) -> int:
        return self.inputs.shape[0]

    @property
    def n_targets(self) -> int:
        return self.targets.shape[0]

    @property
    def n_samples(self) -> int:
        return self.inputs.shape[1]


@dataclass(frozen=True)
class Split:
    train: Dataset
    test: Dataset

    def __post_init__(self):
        if self.train.n_inputs != self.test.n_inputs or self.train.n_targets != self.test.n_targets:
            raise ShapeError("train and test parts have different feature layouts")


def _parses_as_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_csv(path, n_inputs: int, m_targets: int) -> Dataset:
    """Read one sample per row: n_inputs numeric fields, then m_targets.

    A single leading header row is skipped when any of its fields fails to
    parse as a number. Ragged rows and non-numeric or non-finite values are
    reported with their 1-based row (and column) location.
    """
    if n_inputs < 1 or m_targets < 1:
        raise ValueError("need at least one input and one target column")
    expected = n_inputs + m_targets
    with open(path, newline="") as fh:
        raw = [row for row in csv.reader(fh) if any(field.strip() for field in row)]
    if raw and not all(_parses_as_number(f) for f in raw[0]):
        raw = raw[1:]
        offset = 2
    else:
        offset = 1
    if not raw:
        raise ShapeError("file contains no data rows")
    values = np.empty((len(raw), expected))
    for i, fields in enumerate(raw):
        if len(fields) != expected:
            raise ShapeError(f"row {i + offset}: expected {expected} fields, got {len(fields)}")
        for j, text in enumerate(fields):
            try:
                v = float(text)
            except ValueError:
                raise ParseError(f"row {i + offset}, column {j + 1}: not a number: {text!r}") from None
            if not math.isfinite(v):
                raise ParseError(f"row {i + offset}, column {j + 1}: non-finite value {text!r}")
            values[i, j] = v
    return Dataset(values[:, :n_inputs].T, values[:, n_inputs:].T)


def save_csv(ds: Dataset, path, header: bool = True) -> None:
    """Write the transposed layout load_csv reads, with full float precision."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        if header:
            names = [f"x{i + 1}" for i in range(ds.n_inputs)]
            names += [f"t{i + 1}" for i in range(ds.n_targets)]
            writer.writerow(names)
        stacked = np.vstack([ds.inputs, ds.targets]).T
        for row in stacked:
            writer.writerow([repr(float(v)) for v in row])


def split_dataset(ds: Dataset, test_fraction: float, seed: int) -> Split:
    """Seeded shuffle of sample indices, then partition.

    The train part gets round((1 - test_fraction) * N) samples, rounding
    half up; the shuffle comes from numpy's PCG64 stream for the seed.
    """
    if not 0.0 < test_fraction < 1.0:
        raise ValueError("test_fraction must be strictly between 0 and 1")
    total = ds.n_samples
    n_train = math.floor((1.0 - test_fraction) * total + 0.5)
    if n_train < 1 or total - n_train < 1:
        raise TooFewSamples(f"cannot split {total} samples into nonempty parts at fraction {test_fraction}")
    perm = np.random.Generator(np.random.PCG64(seed)).permutation(total)
    tr, te = perm[:n_train], perm[n_train:]
    return Split(
        Dataset(ds.inputs[:, tr], ds.targets[:, tr]),
        Dataset(ds.inputs[:, te], ds.targets[:, te]),
    )


def make_synthetic(n: int, n_samples: int, seed: int, kind: str = NONLINEAR) -> Dataset:
    """Deterministic scalar-target fixtures on the cube [-1, 1]^n.

    From one PCG64(seed) stream, draw the coefficient vector c (n values)
    first, then the inputs X (n rows, n_samples columns), all uniform on
    [-1, 1]. Targets:

      linear:     t = c . x
      nonlinear:  t = sin(pi * (c . x)) + x_1 * x_2

    The draw order is part of the contract; given the seed, any
    implementation reproduces the same dataset bit for bit.
    """
    if n < 2:
        raise ValueError("need at least two input features")
    if n_samples < 10:
        raise ValueError("need at least ten samples")
    if kind not in SYNTHETIC_KINDS:
        raise ValueError(f"unknown synthetic kind {kind!r}")
    rng = np.random.Generator(np.random.PCG64(seed))
    coeff = rng.uniform(-1.0, 1.0, n)
    x = rng.uniform(-1.0, 1.0, (n, n_samples))
    mix = coeff @ x
    if kind == LINEAR:
        t = mix
    else:
        t = np.sin(np.pi * mix) + x[0] * x[1]
    return Dataset(x, t.reshape(1, n_samples))
