"""Single-qubit Pauli channels and their embedding as local operations on
2-4 qubit density matrices via the operator-sum representation.

A channel is a list of Kraus operators K_i with sum_i K_i^dag K_i = I.
The Pauli parameterization uses K_i = a_i * sigma_i over (I, sx, sy, sz)
with sum a_i^2 = 1, which makes the completeness relation exact. The flip
families fix which Pauli mixes with the identity:

    BF  : identity and sigma_x   (a3 = a4 = 0)
    PF  : identity and sigma_z   (a2 = a3 = 0)
    BPF : identity and sigma_y   (a2 = a4 = 0)
"""

import itertools
import json

import numpy as np

from .errors import DimensionMismatchError, NotNormalizedError
from .linalg import IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z, DensityMatrix, kron

COMPLETENESS_TOL = 1e-10
PARAM_NORM_TOL = 1e-12

PAULIS = (IDENTITY_2, SIGMA_X, SIGMA_Y, SIGMA_Z)

# index into (I, sx, sy, sz) of the family's flip coordinate
FLIP_AXIS = {"BF": 1, "BPF": 2, "PF": 3}

FAMILIES = ("BF", "PF", "BPF", "GeneralPauli")


def _canonical_family(family):
    key = str(family).strip()
    for fam in FAMILIES:
        if key.upper() == fam.upper() or (fam == "GeneralPauli" and key.lower() == "general"):
            return fam
    raise ValueError(f"unknown channel family {family!r}; expected one of {FAMILIES}")


class PauliParams:
    """Real 4-vector (a1, a2, a3, a4) with unit Euclidean norm, optionally
    tagged with the flip family whose zero-pattern it must satisfy."""

    __slots__ = ("a", "family")

    def __init__(self, a, family=None):
        a = tuple(float(x) for x in a)
        if len(a) != 4:
            raise ValueError(f"expected 4 parameters, got {len(a)}")
        norm2 = sum(x * x for x in a)
        if abs(norm2 - 1.0) > PARAM_NORM_TOL:
            raise NotNormalizedError(f"sum a_i^2 = {norm2:.15g} deviates from 1 by > {PARAM_NORM_TOL:.1e}")
        if family is not None:
            family = _canonical_family(family)
            if family != "GeneralPauli":
                flip = FLIP_AXIS[family]
                for i in (1, 2, 3):
                    if i != flip and a[i] != 0.0:
                        raise ValueError(f"{family} channel requires a{i + 1} = 0, got {a[i]!r}")
        self.a = a
        self.family = family

    def __repr__(self):
        return f"PauliParams({self.a}, family={self.family!r})"

    def __eq__(self, other):
        return isinstance(other, PauliParams) and self.a == other.a and self.family == other.family

    def __hash__(self):
        return hash((self.a, self.family))


class KrausChannel:
    """Finite set of same-dimension Kraus operators satisfying completeness."""

    __slots__ = ("kraus_ops", "label", "params")

    def __init__(self, kraus_ops, label="Custom", params=None):
        ops = tuple(np.array(k, dtype=complex) for k in kraus_ops)
        if not ops:
            raise ValueError("channel needs at least one Kraus operator")
        dim = ops[0].shape[0]
        for k in ops:
            if k.ndim != 2 or k.shape != (dim, dim):
                raise DimensionMismatchError("Kraus operators must be square and of equal dimension")
            k.setflags(write=False)
        total = sum(k.conj().T @ k for k in ops)
        err = float(np.max(np.abs(total - np.eye(dim))))
        if err > COMPLETENESS_TOL:
            raise NotNormalizedError(f"sum K_i^dag K_i deviates from identity by {err:.3e} > {COMPLETENESS_TOL:.1e}")
        self.kraus_ops = ops
        self.label = str(label)
        self.params = params

    @property
    def dim(self):
        return self.kraus_ops[0].shape[0]

    def __repr__(self):
        return f"KrausChannel(label={self.label!r}, n_ops={len(self.kraus_ops)})"


def pauli_channel(params):
    """Kraus set {a_i * sigma_i : a_i != 0} for unit-norm Pauli parameters."""
    if not isinstance(params, PauliParams):
        params = PauliParams(params)
    ops = [a * sigma for a, sigma in zip(params.a, PAULIS) if a != 0.0]
    return KrausChannel(ops, label=params.family or "GeneralPauli", params=params)


def identity_channel():
    return pauli_channel(PauliParams((1.0, 0.0, 0.0, 0.0)))


def flip_channel(family, p):
    """Family channel with flip probability p: a = (sqrt(1-p), sqrt(p)) on the
    identity and the family's flip coordinate."""
    family = _canonical_family(family)
    if family == "GeneralPauli":
        raise ValueError("a flip probability needs a BF, PF, or BPF family")
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"flip probability must be in [0, 1], got {p}")
    a = [0.0] * 4
    a[0] = np.sqrt(1.0 - p)
    a[FLIP_AXIS[family]] = np.sqrt(p)
    return pauli_channel(PauliParams(a, family=family))


def sample_channel(family, rng):
    """Draw channel parameters uniformly on the unit sphere of the family's
    free coordinates (2 for BF/PF/BPF, 4 for GeneralPauli) via normalized
    Gaussians; deterministic for a given generator state."""
    family = _canonical_family(family)
    if family == "GeneralPauli":
        g = rng.standard_normal(4)
        a = g / np.linalg.norm(g)
        return pauli_channel(PauliParams(tuple(a), family=family))
    g = rng.standard_normal(2)
    g = g / np.linalg.norm(g)
    a = [0.0] * 4
    a[0] = g[0]
    a[FLIP_AXIS[family]] = g[1]
    return pauli_channel(PauliParams(a, family=family))


class ChannelAssignment:
    """Per-qubit channel table for an n-qubit system.

    Qubits without an entry receive the identity channel. Channels must be
    single-qubit; joint multi-qubit channels are out of scope.
    """

    __slots__ = ("n_qubits", "per_qubit")

    def __init__(self, n_qubits, per_qubit=()):
        n_qubits = int(n_qubits)
        if n_qubits < 1:
            raise ValueError(f"need at least one qubit, got {n_qubits}")
        entries = dict(per_qubit)
        table = {}
        for qubit, channel in entries.items():
            qubit = int(qubit)
            if not 1 <= qubit <= n_qubits:
                raise ValueError(f"qubit index {qubit} outside 1..{n_qubits}")
            if channel.dim != 2:
                raise DimensionMismatchError("assignments take single-qubit channels only")
            if qubit in table:
                raise ValueError(f"duplicate assignment for qubit {qubit}")
            table[qubit] = channel
        self.n_qubits = n_qubits
        self.per_qubit = table

    @classmethod
    def many_sided(cls, channels):
        """One channel per qubit, in qubit order."""
        channels = tuple(channels)
        return cls(len(channels), {q: ch for q, ch in enumerate(channels, start=1)})

    def kraus_lists(self):
        ident = (IDENTITY_2,)
        return [self.per_qubit[q].kraus_ops if q in self.per_qubit else ident
                for q in range(1, self.n_qubits + 1)]


def apply(assignment, rho):
    """Operator-sum application of local channels: sum over the Cartesian
    product of per-qubit Kraus choices of (kron of choices) rho (.)^dag."""
    if rho.n_qubits != assignment.n_qubits:
        raise DimensionMismatchError(
            f"state has {rho.n_qubits} qubits but assignment covers {assignment.n_qubits}")
    out = np.zeros_like(rho.mat)
    for combo in itertools.product(*assignment.kraus_lists()):
        full = combo[0]
        for op in combo[1:]:
            full = kron(full, op)
        out += full @ rho.mat @ full.conj().T
    return DensityMatrix(out)


def single_sided(channel, target_qubit, psi):
    """Channel on one qubit of a pure state, identity elsewhere."""
    target_qubit = int(target_qubit)
    if not 1 <= target_qubit <= psi.n_qubits:
        raise ValueError(f"qubit index {target_qubit} outside 1..{psi.n_qubits}")
    assignment = ChannelAssignment(psi.n_qubits, {target_qubit: channel})
    return apply(assignment, psi.to_density())


def channel_from_json(obj):
    """Build a channel from {"family": ..., "p": x} or {"family": ..., "a": [a1..a4]}."""
    if isinstance(obj, str):
        return parse_channel(obj)
    if not isinstance(obj, dict) or "family" not in obj:
        raise ValueError(f"cannot interpret {obj!r} as a channel; need a 'family' field")
    family = _canonical_family(obj["family"])
    if "a" in obj:
        return pauli_channel(PauliParams(tuple(float(x) for x in obj["a"]),
                                         family=family))
    if "p" in obj:
        return flip_channel(family, obj["p"])
    raise ValueError("channel object needs either 'p' or 'a'")


def parse_channel(token):
    """Parse one channel token: 'I', 'BF:p=0.2', 'PF:p=0.35', 'BPF:p=0.1',
    or a JSON object string."""
    token = token.strip()
    if token.startswith("{"):
        return channel_from_json(json.loads(token))
    if token.upper() in ("I", "ID", "IDENTITY"):
        return identity_channel()
    name, _, args = token.partition(":")
    family = _canonical_family(name)
    if not args:
        raise ValueError(f"channel {family} needs a parameter, e.g. {family}:p=0.2")
    key, _, value = args.partition("=")
    if key.strip() != "p":
        raise ValueError(f"unknown channel parameter {key.strip()!r}")
    return flip_channel(family, float(value))


def parse_channel_list(spec, n_qubits=None):
    """Parse a comma-separated channel list, one token per qubit in order."""
    tokens = [t for t in str(spec).split(",") if t.strip()]
    channels = tuple(parse_channel(t) for t in tokens)
    if n_qubits is not None and len(channels) != n_qubits:
        raise DimensionMismatchError(f"got {len(channels)} channels for {n_qubits} qubits")
    return channels
