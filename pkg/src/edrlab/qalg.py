"""Dense complex linear algebra and random-state machinery.

Operators are plain ``numpy`` complex arrays of shape ``(d, d)`` and pure
states are complex arrays of shape ``(d,)``. The ``check_*`` helpers attest
the Hermitian / unitary / unit-norm properties at a fixed absolute tolerance.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch, NotHermitian, NotUnitary, ZeroVector

ATOL = 1e-9
VARIANCE_CLAMP = 1e-12
ZERO_NORM = 1e-12
GS_SKIP = 1e-8

_SEED_MASK = (1 << 64) - 1


# -- validation --------------------------------------------------------------

def as_operator(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise DimensionMismatch(f"operator must be square, got shape {x.shape}")
    return x


def as_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1:
        raise DimensionMismatch(f"vector must be one-dimensional, got shape {v.shape}")
    return v


def is_hermitian(x, atol=ATOL) -> bool:
    x = as_operator(x)
    return bool(np.max(np.abs(x - x.conj().T), initial=0.0) <= atol)


def is_unitary(x, atol=ATOL) -> bool:
    x = as_operator(x)
    eye = np.eye(x.shape[0])
    return bool(np.max(np.abs(x.conj().T @ x - eye), initial=0.0) <= atol)


def check_hermitian(x, name="operator") -> np.ndarray:
    x = as_operator(x)
    if not is_hermitian(x):
        raise NotHermitian(f"{name} is not Hermitian within {ATOL}")
    return x


def check_unitary(x, name="operator") -> np.ndarray:
    x = as_operator(x)
    if not is_unitary(x):
        raise NotUnitary(f"{name} is not unitary within {ATOL}")
    return x


def check_state(s, name="state") -> np.ndarray:
    """Return ``s`` as a complex vector after checking it has unit norm."""
    s = as_vector(s)
    if abs(np.linalg.norm(s) - 1.0) > ATOL:
        raise ValueError(f"{name} is not normalized (norm {np.linalg.norm(s):.12g})")
    return s


def _same_dim(x, y):
    if x.shape[-1] != y.shape[0]:
        raise DimensionMismatch(f"dimension mismatch: {x.shape} vs {y.shape}")


# -- algebra -----------------------------------------------------------------

def tensor(x, y) -> np.ndarray:
    """Kronecker product with ``x`` on the first (system) slot."""
    return np.kron(as_operator(x), as_operator(y))


def dagger(x) -> np.ndarray:
    return np.asarray(x).conj().T


def commutator(x, y) -> np.ndarray:
    x, y = as_operator(x), as_operator(y)
    if x.shape != y.shape:
        raise DimensionMismatch(f"commutator of {x.shape} and {y.shape}")
    return x @ y - y @ x


def expectation(x, s) -> complex:
    x, s = as_operator(x), as_vector(s)
    _same_dim(x, s)
    return complex(np.vdot(s, x @ s))


def variance(x, s) -> float:
    """<x^2> - <x>^2 on the pure state ``s``; ``x`` must be Hermitian."""
    x = check_hermitian(x)
    s = as_vector(s)
    _same_dim(x, s)
    xs = x @ s
    mean = np.vdot(s, xs).real
    value = float(np.vdot(xs, xs).real - mean * mean)
    if value < 0.0:
        if value < -VARIANCE_CLAMP:
            raise ArithmeticError(f"variance {value:.3e} is negative beyond round-off")
        value = 0.0
    return value


def project_orthogonal(v, s) -> np.ndarray:
    """(I - |s><s|) v. Works on a single vector or a stack of row vectors."""
    v = np.asarray(v, dtype=complex)
    s = as_vector(s)
    if v.shape[-1] != s.shape[0]:
        raise DimensionMismatch(f"vector of length {v.shape[-1]} vs state of length {s.shape[0]}")
    overlaps = v @ s.conj()
    return v - np.multiply.outer(overlaps, s)


def normalize(v) -> np.ndarray:
    v = as_vector(v)
    norm = np.linalg.norm(v)
    if norm <= ZERO_NORM:
        raise ZeroVector(f"cannot normalize a vector of norm {norm:.3e}")
    return v / norm


def orthonormal_complement_basis(s) -> list[np.ndarray]:
    """Complete ``s`` to an orthonormal basis and return the d-1 new vectors.

    Modified Gram-Schmidt over the standard basis e_0, e_1, ..., with a second
    orthogonalization pass; candidates whose residual norm drops below 1e-8
    are skipped. The result is deterministic for a given ``s``.
    """
    s = normalize(s)
    d = s.shape[0]
    basis = [s]
    for k in range(d):
        if len(basis) == d:
            break
        v = np.zeros(d, dtype=complex)
        v[k] = 1.0
        for _ in range(2):
            for e in basis:
                v = v - np.vdot(e, v) * e
        norm = np.linalg.norm(v)
        if norm < GS_SKIP:
            continue
        basis.append(v / norm)
    return basis[1:]


# -- randomness --------------------------------------------------------------

def make_rng(seed: int, *keys: int) -> np.random.Generator:
    """Deterministic generator for ``seed``; ``keys`` select an independent sub-stream."""
    entropy = [int(seed) & _SEED_MASK, *(int(k) & _SEED_MASK for k in keys)]
    return np.random.default_rng(np.random.SeedSequence(entropy))


def derive_seed(seed: int, *keys: int) -> int:
    """A 64-bit seed obtained by hashing ``(seed, *keys)``."""
    entropy = [int(seed) & _SEED_MASK, *(int(k) & _SEED_MASK for k in keys)]
    return int(np.random.SeedSequence(entropy).generate_state(1, np.uint64)[0])


def haar_random_states(d: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """``n`` Haar-random pure states as the rows of an ``(n, d)`` array.

    Rows are drawn in order, so the first ``m`` rows for a given generator
    state do not depend on ``n``.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    g = rng.standard_normal((n, d, 2))
    z = g[..., 0] + 1j * g[..., 1]
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def haar_random_state(d: int, rng: np.random.Generator) -> np.ndarray:
    return haar_random_states(d, 1, rng)[0]


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((d, d, 2))
    z = g[..., 0] + 1j * g[..., 1]
    return (z + z.conj().T) / 2


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    if d < 1:
        raise ValueError("dimension must be >= 1")
    g = rng.standard_normal((d, d, 2))
    z = (g[..., 0] + 1j * g[..., 1]) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    diag = np.diagonal(r)
    phases = diag / np.abs(diag)
    return q * phases
