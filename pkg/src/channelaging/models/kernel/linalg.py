import math
from typing import Tuple, Union

import numpy as np
import scipy.linalg
import scipy.special

from channelaging.errors import NotPositiveDefiniteError
from channelaging.models.kernel.rng import Rng

ArrayOrFloat = Union[float, np.ndarray]


def bessel_j0(x: ArrayOrFloat) -> ArrayOrFloat:
    """
    Zero-order Bessel function of the first kind.

    Accepts a scalar or an array; scalars come back as python floats.
    """
    values = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise ValueError(f"bessel_j0 needs a finite argument, got {x!r}")
    result = scipy.special.j0(values)
    if values.ndim == 0:
        return float(result)
    return result


def bessel_j0_series(x: float, terms: int = 80) -> float:
    """Power series sum (-1)^m (x/2)^(2m) / (m!)^2, accurate to ~1e-12 for |x| <= 12."""
    if not math.isfinite(x):
        raise ValueError(f"bessel_j0_series needs a finite argument, got {x!r}")
    q = (x / 2.0) ** 2
    term = 1.0
    parts = [term]
    for m in range(1, terms):
        term *= -q / (m * m)
        parts.append(term)
        if abs(term) < 1e-300:
            break
    return math.fsum(parts)


def sample_complex_gaussian(
    rows: int,
    cols: int,
    variance: float,
    rng: Rng,
    batch: Tuple[int, ...] = (),
) -> np.ndarray:
    """
    Draw a ``batch + (rows, cols)`` array of i.i.d. CN(0, variance) entries.

    The real and imaginary parts each carry ``variance / 2``. The same number
    of normals is consumed whatever the variance, so a zero variance still
    advances the stream.
    """
    if not variance >= 0 or not math.isfinite(variance):
        raise ValueError(f"variance must be finite and >= 0, got {variance}")
    shape = tuple(batch) + (rows, cols)
    real = rng.standard_normal(shape)
    imag = rng.standard_normal(shape)
    return math.sqrt(variance / 2.0) * (real + 1j * imag)


def hermitian_solve(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Solve ``A X = B`` for Hermitian positive definite ``A`` through a Cholesky factorization."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got shape {A.shape}")
    if B.shape[0] != A.shape[0]:
        raise ValueError(f"B has {B.shape[0]} rows, A is {A.shape[0]}x{A.shape[1]}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(B))):
        raise ValueError("hermitian_solve inputs must be finite")

    scale = np.max(np.abs(A)) if A.size else 0.0
    if not np.allclose(A, A.conj().T, rtol=0.0, atol=1e-10 * scale):
        raise NotPositiveDefiniteError("matrix is not Hermitian")
    try:
        factor = scipy.linalg.cho_factor(A, lower=True, check_finite=False)
    except np.linalg.LinAlgError as e:
        raise NotPositiveDefiniteError(f"Cholesky factorization failed: {e}") from e
    return scipy.linalg.cho_solve(factor, B, check_finite=False)
