"""Wootters concurrence, its bipartite generalization over SO(d1) x SO(d2)
state inversions, and the three-qubit lower bound built from the 2|1 cuts.

For a cut with block dimensions d1 x d2, every pair of rotation generators
(L_m, L_n) defines an inversion S = L_m (x) L_n and a term

    C_mn = max(0, l1 - l2 - l3 - l4)

where l1 >= l2 >= ... are the square roots of the eigenvalues of
rho @ (S rho* S). At most four of those eigenvalues can be nonzero because
each generator has rank 2; the rest of the spectrum is asserted small. The
total over all pairs is sqrt(sum of C_mn^2).

Numerically the l's are obtained as the singular values of
sqrt(rho) @ S @ sqrt(rho)*: that matrix A satisfies A A^dag =
sqrt(rho) (S rho* S) sqrt(rho), which shares its spectrum with
rho (S rho* S), so the singular values are exactly the l's. Reading them
from an SVD avoids taking square roots of near-zero eigenvalues, which
would otherwise inject noise of order sqrt(machine epsilon).
"""

from functools import lru_cache

import numpy as np

from .errors import DimensionMismatchError, SpectralLeakError
from .linalg import SIGMA_Y, kron, permute_qubits, psd_sqrt

LEAK_TOL = 1e-8  # max allowed eigenvalue of rho @ rho_tilde beyond the top four


class Bipartition:
    """Ordered split of qubits 1..n into two nonempty blocks, e.g. {1,2}|{3}."""

    __slots__ = ("block1", "block2")

    def __init__(self, block1, block2):
        block1 = tuple(int(q) for q in block1)
        block2 = tuple(int(q) for q in block2)
        n = len(block1) + len(block2)
        if not block1 or not block2:
            raise ValueError("both blocks must be nonempty")
        if sorted(block1 + block2) != list(range(1, n + 1)):
            raise ValueError(f"blocks {block1}|{block2} must partition 1..{n}")
        self.block1 = block1
        self.block2 = block2

    @property
    def n_qubits(self):
        return len(self.block1) + len(self.block2)

    @property
    def d1(self):
        return 1 << len(self.block1)

    @property
    def d2(self):
        return 1 << len(self.block2)

    @property
    def label(self):
        return "".join(map(str, self.block1)) + "|" + "".join(map(str, self.block2))

    def __repr__(self):
        return f"Bipartition({self.label!r})"

    def __eq__(self, other):
        return (isinstance(other, Bipartition)
                and self.block1 == other.block1 and self.block2 == other.block2)

    def __hash__(self):
        return hash((self.block1, self.block2))


def parse_cut(spec):
    """Parse '12|3' or '1,2|3' into a Bipartition."""
    text = str(spec).strip()
    left, sep, right = text.partition("|")
    if not sep:
        raise ValueError(f"cut spec {spec!r} needs a '|' separator")

    def block(part):
        part = part.strip()
        if "," in part:
            return tuple(int(tok) for tok in part.split(",") if tok.strip())
        return tuple(int(ch) for ch in part if not ch.isspace())

    return Bipartition(block(left), block(right))


@lru_cache(maxsize=None)
def so_generators(d):
    """The d(d-1)/2 rotation generators E_ab (+1 at (a,b), -1 at (b,a), a < b)
    in lexicographic order."""
    if d < 2:
        raise ValueError(f"need dimension >= 2, got {d}")
    gens = []
    for a in range(d):
        for b in range(a + 1, d):
            g = np.zeros((d, d))
            g[a, b] = 1.0
            g[b, a] = -1.0
            g.setflags(write=False)
            gens.append(g)
    return tuple(gens)


@lru_cache(maxsize=None)
def _pair_inversions(d1, d2):
    """(m, n, L_m kron L_n) for every generator pair, 1-based lexicographic."""
    ops = []
    for m, lm in enumerate(so_generators(d1), start=1):
        for n, ln in enumerate(so_generators(d2), start=1):
            s = kron(lm, ln)
            s.setflags(write=False)
            ops.append((m, n, s))
    return tuple(ops)


class PairTerm:
    """One generator pair's contribution: indices (1-based), the four l's, C_mn."""

    __slots__ = ("m", "n", "lambdas", "value")

    def __init__(self, m, n, lambdas, value):
        self.m = m
        self.n = n
        self.lambdas = lambdas
        self.value = value

    def __repr__(self):
        return f"PairTerm(m={self.m}, n={self.n}, value={self.value:.6g})"


class ConcurrenceBreakdown:
    __slots__ = ("pairs", "total")

    def __init__(self, pairs):
        self.pairs = tuple(pairs)
        self.total = float(np.sqrt(sum(p.value * p.value for p in self.pairs)))

    def __repr__(self):
        return f"ConcurrenceBreakdown(total={self.total:.6g}, pairs={len(self.pairs)})"


def _inversion_lambdas(root, root_conj, s):
    """Singular values of sqrt(rho) S sqrt(rho)*, descending."""
    return np.linalg.svd(root @ s @ root_conj, compute_uv=False)


_SPIN_FLIP = kron(SIGMA_Y, SIGMA_Y)
_SPIN_FLIP.setflags(write=False)


def wootters(rho):
    """Two-qubit mixed-state concurrence from the spin-flip spectrum."""
    if rho.n_qubits != 2:
        raise DimensionMismatchError(f"Wootters concurrence needs 2 qubits, got {rho.n_qubits}")
    root = psd_sqrt(rho.mat)
    lam = _inversion_lambdas(root, root.conj(), _SPIN_FLIP)
    return min(1.0, max(0.0, float(lam[0] - lam[1] - lam[2] - lam[3])))


def bipartite_concurrence(rho, cut, leak_tol=LEAK_TOL):
    """Generalized concurrence of rho across a bipartition.

    Qubits are reordered so block1 precedes block2, then every generator
    pair contributes a C_mn from its top four l's. A SpectralLeakError means
    some discarded eigenvalue of rho @ rho_tilde exceeded leak_tol.
    """
    if cut.n_qubits != rho.n_qubits:
        raise DimensionMismatchError(
            f"cut {cut.label} covers {cut.n_qubits} qubits but state has {rho.n_qubits}")
    mat = permute_qubits(rho.mat, cut.block1 + cut.block2)
    root = psd_sqrt(mat)
    root_conj = root.conj()
    pairs = []
    for m, n, s in _pair_inversions(cut.d1, cut.d2):
        lam = _inversion_lambdas(root, root_conj, s)
        if lam.shape[0] > 4:
            leak = float(lam[4] ** 2)
            if leak > leak_tol:
                raise SpectralLeakError(
                    f"pair (m={m}, n={n}) of cut {cut.label}: eigenvalue {leak:.3e} "
                    f"beyond the top four exceeds {leak_tol:.1e}")
        top = lam[:4]
        value = max(0.0, float(top[0] - top[1:].sum()))
        pairs.append(PairTerm(m, n, tuple(float(x) for x in top), value))
    return ConcurrenceBreakdown(pairs)


def cut_concurrence(rho, cut, leak_tol=LEAK_TOL):
    """Concurrence across a cut; Wootters for two qubits, else the generator sum."""
    if rho.n_qubits == 2:
        return wootters(rho)
    return bipartite_concurrence(rho, cut, leak_tol=leak_tol).total


def tau3(rho, leak_tol=LEAK_TOL):
    """Root-mean-square of the three 2|1 bipartite concurrences of a 3-qubit state."""
    if rho.n_qubits != 3:
        raise DimensionMismatchError(f"tau3 needs 3 qubits, got {rho.n_qubits}")
    total = 0.0
    for cut in (Bipartition((1, 2), (3,)), Bipartition((1, 3), (2,)), Bipartition((2, 3), (1,))):
        total += bipartite_concurrence(rho, cut, leak_tol=leak_tol).total ** 2
    return float(np.sqrt(total / 3.0))
