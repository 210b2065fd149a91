"""Dense complex matrix primitives: Pauli constants, eigensolves, PSD square
roots, qubit permutation, and the validated density-matrix container.

All matrices are plain numpy arrays (complex128). Qubits are numbered 1..n,
big-endian: qubit 1 is the leftmost tensor factor, so basis index i has the
bit of qubit k at position n-k, and |011> has index 3 for n=3.
"""

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidPermutationError,
    NotHermitianError,
    NotPSDError,
)

HERM_TOL = 1e-10      # max entrywise |M - M^dag| accepted as Hermitian
TRACE_TOL = 1e-10     # |tr(rho) - 1| accepted for density matrices
EIG_FLOOR = -1e-10    # most negative eigenvalue accepted for density matrices
PSD_CLAMP = 1e-8      # eigenvalues in [-PSD_CLAMP, 0) clamp to 0; below raises
RANK_TOL = 1e-10      # absolute eigenvalue threshold for numerical rank


def _frozen(a):
    a = np.asarray(a)
    a.setflags(write=False)
    return a


IDENTITY_2 = _frozen(np.eye(2, dtype=complex))
SIGMA_X = _frozen(np.array([[0, 1], [1, 0]], dtype=complex))
SIGMA_Y = _frozen(np.array([[0, -1j], [1j, 0]], dtype=complex))
SIGMA_Z = _frozen(np.array([[1, 0], [0, -1]], dtype=complex))


def kron(a, b):
    """Kronecker product, block structure (a_ij * b).

    Broadcasting implementation; for the tiny matrices used here it avoids
    most of np.kron's call overhead while computing the same products.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    out = a[:, None, :, None] * b[None, :, None, :]
    return out.reshape(a.shape[0] * b.shape[0], a.shape[1] * b.shape[1])


def hermiticity_error(m):
    """Max entrywise deviation |M - M^dag|."""
    m = np.asarray(m)
    return float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0


def require_hermitian(m, tol=HERM_TOL, what="matrix"):
    err = hermiticity_error(m)
    if err > tol:
        raise NotHermitianError(f"{what} is not Hermitian: residual {err:.3e} > {tol:.1e}")


def hermitian_eig(m, tol=HERM_TOL):
    """Eigenvalues (descending) and matching eigenvector columns of a Hermitian matrix."""
    m = np.asarray(m, dtype=complex)
    require_hermitian(m, tol)
    w, v = np.linalg.eigh(m)
    return w[::-1].copy(), v[:, ::-1].copy()


def psd_sqrt(m, tol=HERM_TOL):
    """Hermitian PSD square root r with r @ r == m.

    Eigenvalues in [-PSD_CLAMP, 0) are treated as roundoff and clamped to 0;
    anything below -PSD_CLAMP raises NotPSDError.
    """
    m = np.asarray(m, dtype=complex)
    require_hermitian(m, tol)
    w, v = np.linalg.eigh(m)
    if w[0] < -PSD_CLAMP:
        raise NotPSDError(f"matrix has eigenvalue {w[0]:.3e} < -{PSD_CLAMP:.1e}")
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def n_qubits_of(dim):
    """Number of qubits for a power-of-two dimension."""
    n = int(dim).bit_length() - 1
    if dim <= 0 or (1 << n) != dim:
        raise DimensionMismatchError(f"dimension {dim} is not a power of two")
    return n


def permutation_indices(n_qubits, perm):
    """Basis index map for a qubit relabeling.

    perm is a permutation of 1..n; output qubit k is input qubit perm[k].
    Returns src such that reordered[i] = original[src[i]] for state vectors.
    """
    perm = tuple(int(q) for q in perm)
    if sorted(perm) != list(range(1, n_qubits + 1)):
        raise InvalidPermutationError(f"{perm} is not a permutation of 1..{n_qubits}")
    dim = 1 << n_qubits
    idx = np.arange(dim)
    src = np.zeros(dim, dtype=np.intp)
    for k in range(n_qubits):
        # bit of output qubit k+1 comes from input qubit perm[k]
        out_shift = n_qubits - 1 - k
        in_shift = n_qubits - perm[k]
        src |= (((idx >> out_shift) & 1) << in_shift).astype(np.intp)
    return src


def permute_qubits(m, perm):
    """Relabel the qubits of a 2^n x 2^n matrix; pure reindexing, no arithmetic."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"expected a square matrix, got shape {m.shape}")
    n = n_qubits_of(m.shape[0])
    src = permutation_indices(n, perm)
    return m[np.ix_(src, src)]


class DensityMatrix:
    """Hermitian, unit-trace, PSD matrix on n qubits.

    Validated on construction; raises NotHermitianError / ValueError /
    NotPSDError when the tolerances (HERM_TOL, TRACE_TOL, EIG_FLOOR) are
    violated. The eigenvalue spectrum is computed once and reused for rank.
    """

    __slots__ = ("mat", "n_qubits", "_eigs")

    def __init__(self, mat):
        mat = np.array(mat, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise DimensionMismatchError(f"expected a square matrix, got shape {mat.shape}")
        if not np.all(np.isfinite(mat)):
            raise ValueError("density matrix has non-finite entries")
        n = n_qubits_of(mat.shape[0])
        require_hermitian(mat, HERM_TOL, what="density matrix")
        tr = complex(np.trace(mat))
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density matrix trace {tr:.12g} deviates from 1 by > {TRACE_TOL:.1e}")
        eigs = np.linalg.eigvalsh(mat)
        if eigs[0] < EIG_FLOOR:
            raise NotPSDError(f"density matrix has eigenvalue {eigs[0]:.3e} < {EIG_FLOOR:.1e}")
        mat.setflags(write=False)
        self.mat = mat
        self.n_qubits = n
        self._eigs = _frozen(eigs)

    @property
    def dim(self):
        return self.mat.shape[0]

    @property
    def eigenvalues(self):
        """Spectrum in ascending order."""
        return self._eigs

    @property
    def rank(self):
        return numerical_rank(self)

    def permuted(self, perm):
        return DensityMatrix(permute_qubits(self.mat, perm))

    def __repr__(self):
        return f"DensityMatrix(n_qubits={self.n_qubits}, rank={self.rank})"


def numerical_rank(rho, tol=RANK_TOL):
    """Count of eigenvalues strictly above tol (absolute; trace is 1)."""
    return int(np.count_nonzero(rho.eigenvalues > tol))
