"""Named reproduction scenarios: the three-BPF lower-bound sweep and the
rank table for every (state, channel family) scenario with a claimed rank."""

import json
import math
from dataclasses import dataclass

from .channels import ChannelAssignment, apply, flip_channel
from .concurrence import LEAK_TOL, tau3
from .linalg import numerical_rank
from .states import parse_state

VANISH_TOL = 1e-6       # tau3 at or below this counts as vanished
BISECT_TOL = 1e-4       # p resolution of the zero-crossing refinement

SCENARIOS = ("ghz3-bpf3",)


def _grid(points):
    if points < 2:
        raise ValueError(f"need at least two grid points, got {points}")
    return tuple(0.5 * k / (points - 1) for k in range(points))


@dataclass(frozen=True)
class SweepSpec:
    """Flip-probability sweep for a named scenario on p in [0, 0.5]."""

    p_grid: tuple = _grid(101)
    scenario: str = "ghz3-bpf3"

    def __post_init__(self):
        grid = tuple(float(p) for p in self.p_grid)
        if list(grid) != sorted(grid):
            raise ValueError("p grid must be sorted ascending")
        if grid and (grid[0] < 0.0 or grid[-1] > 0.5):
            raise ValueError("p grid must lie within [0, 0.5]")
        object.__setattr__(self, "p_grid", grid)
        if self.scenario not in SCENARIOS:
            raise ValueError(f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}")

    @classmethod
    def uniform(cls, points=101, scenario="ghz3-bpf3"):
        return cls(p_grid=_grid(points), scenario=scenario)


def _tau3_bpf3(p, leak_tol=LEAK_TOL):
    """tau3 of the three-qubit GHZ state after identical BPF(p) on every qubit."""
    psi = parse_state("ghz3")
    channel = flip_channel("BPF", p)
    rho = apply(ChannelAssignment.many_sided([channel] * 3), psi.to_density())
    return tau3(rho, leak_tol=leak_tol)


@dataclass(frozen=True)
class Figure1Result:
    """Sweep rows (p, direct tau3, product-form and sum-form closed curves)
    plus the refined p at which the direct curve vanishes (NaN if it never does)."""

    spec: SweepSpec
    rows: tuple
    zero_crossing: float

    def to_csv(self):
        header = {
            "scenario": self.spec.scenario,
            "points": len(self.spec.p_grid),
            "p_min": self.spec.p_grid[0],
            "p_max": self.spec.p_grid[-1],
            "zero_crossing": None if math.isnan(self.zero_crossing) else self.zero_crossing,
        }
        out = ["# " + json.dumps(header, sort_keys=True)]
        out.append("p,tau3_direct,product_form,sum_form")
        for p, direct, prod, summ in self.rows:
            out.append(f"{p!r},{direct!r},{prod!r},{summ!r}")
        return "\n".join(out) + "\n"


def figure1_scan(spec=None, leak_tol=LEAK_TOL):
    """Sweep the scenario over the p grid.

    Column 2 is the direct lower bound of the evolved (rank-8) state; columns
    3 and 4 are the closed-form curves (1-2p)^3 and (1-2p)^2 that the product
    and sum decompositions predict for identical channels. The vanishing point
    of the direct curve is located by the first grid point at or below
    VANISH_TOL and refined by bisection to BISECT_TOL.
    """
    spec = spec or SweepSpec()
    rows = []
    for p in spec.p_grid:
        direct = _tau3_bpf3(p, leak_tol=leak_tol)
        rows.append((float(p), float(direct), float((1 - 2 * p) ** 3), float((1 - 2 * p) ** 2)))

    crossing = math.nan
    for k in range(1, len(rows)):
        if rows[k][1] <= VANISH_TOL < rows[k - 1][1]:
            lo, hi = rows[k - 1][0], rows[k][0]
            while hi - lo > BISECT_TOL:
                mid = 0.5 * (lo + hi)
                if _tau3_bpf3(mid, leak_tol=leak_tol) > VANISH_TOL:
                    lo = mid
                else:
                    hi = mid
            crossing = 0.5 * (lo + hi)
            break
    return Figure1Result(spec=spec, rows=tuple(rows), zero_crossing=crossing)


# Every (state, per-qubit family) scenario with a known final rank, and the
# rank it is expected to have for generic in-family channel parameters.
RANK_SCENARIOS = (
    ("ghz3", ("PF", "PF", "PF"), 2),
    ("ghz3", ("BF", "BF", "BF"), 4),
    ("ghz3", ("PF", "PF", "BF"), 4),
    ("ghz3", ("PF", "PF", "BPF"), 4),
    ("w3", ("PF", "PF", "PF"), 3),
    ("ghz4", ("PF", "PF", "PF", "PF"), 2),
    ("ghz4", ("PF", "PF", "PF", "BF"), 4),
    ("w4", ("PF", "PF", "PF", "PF"), 4),
    ("ghz3", ("BPF", "BPF", "BPF"), 8),
)

# Fixed, pairwise-distinct generic flip probabilities (qubit k gets the k-th);
# distinct values keep the channels inequivalent so ranks are not accidentally
# degenerate.
GENERIC_PS = (0.13, 0.23, 0.31, 0.41)


@dataclass(frozen=True)
class RankRow:
    state: str
    families: tuple
    computed_rank: int
    claimed_rank: int

    @property
    def match(self):
        return self.computed_rank == self.claimed_rank


def rank_table(p_values=GENERIC_PS):
    """Compute the final rank of every catalogued scenario next to its claim."""
    rows = []
    for state_name, families, claimed in RANK_SCENARIOS:
        psi = parse_state(state_name)
        channels = [flip_channel(fam, p_values[k]) for k, fam in enumerate(families)]
        rho = apply(ChannelAssignment.many_sided(channels), psi.to_density())
        rows.append(RankRow(state_name, tuple(families), numerical_rank(rho), claimed))
    return tuple(rows)


def rank_table_csv(rows):
    out = ["state,families,computed_rank,claimed_rank,match"]
    for r in rows:
        fams = "+".join(r.families)
        out.append(f"{r.state},{fams},{r.computed_rank},{r.claimed_rank},{int(r.match)}")
    return "\n".join(out) + "\n"
