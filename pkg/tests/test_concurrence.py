import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conclab.channels import ChannelAssignment, apply, flip_channel
from conclab.concurrence import (
    Bipartition,
    bipartite_concurrence,
    cut_concurrence,
    parse_cut,
    so_generators,
    tau3,
    wootters,
)
from conclab.errors import DimensionMismatchError, SpectralLeakError
from conclab.linalg import DensityMatrix, kron
from conclab.states import bell, ghz, random_pure, w

from oracles import (
    bell_mixture_concurrence,
    pure_cut_concurrence,
    random_density,
    random_unitary,
    wootters_charpoly,
)

SQ2 = 1 / np.sqrt(2)


def bell_mixture(x):
    phi = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    psi = np.array([0, 1, 1, 0], dtype=complex) / np.sqrt(2)
    return DensityMatrix(x * np.outer(phi, phi) + (1 - x) * np.outer(psi, psi))


class TestGenerators:
    def test_unique_two_dimensional_generator(self):
        gens = so_generators(2)
        assert len(gens) == 1
        assert np.array_equal(gens[0], np.array([[0.0, 1.0], [-1.0, 0.0]]))

    @pytest.mark.parametrize("d,count", [(2, 1), (4, 6), (8, 28)])
    def test_counts(self, d, count):
        assert len(so_generators(d)) == d * (d - 1) // 2

    def test_antisymmetric_rank_two(self):
        for g in so_generators(4):
            assert np.array_equal(g, -g.T)
            assert np.linalg.matrix_rank(g) == 2

    def test_lexicographic_order(self):
        gens = so_generators(3)
        positions = [tuple(np.argwhere(g == 1.0)[0]) for g in gens]
        assert positions == [(0, 1), (0, 2), (1, 2)]


class TestWootters:
    def test_maximally_entangled(self):
        assert abs(wootters(bell(SQ2).to_density()) - 1.0) < 1e-12

    def test_product_state(self):
        assert wootters(bell(1.0).to_density()) == 0.0

    def test_two_bell_mixture(self):
        rho = bell_mixture(0.7)  # weights (0.7, 0.3)
        assert abs(wootters(rho) - 0.4) < 1e-12
        assert abs(wootters(rho) - bell_mixture_concurrence(0.7)) < 1e-12
        assert abs(wootters(rho) - wootters_charpoly(rho.mat)) < 1e-8

    def test_range(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            c = wootters(DensityMatrix(random_density(2, 4, rng)))
            assert 0.0 <= c <= 1.0

    def test_matches_characteristic_polynomial_on_low_rank(self):
        rng = np.random.default_rng(37)
        for _ in range(100):
            rho = DensityMatrix(random_density(2, 2, rng))
            assert abs(wootters(rho) - wootters_charpoly(rho.mat)) <= 1e-8

    def test_local_unitary_invariance(self):
        rng = np.random.default_rng(41)
        for _ in range(20):
            rho = DensityMatrix(random_density(2, 3, rng))
            u = kron(random_unitary(2, rng), random_unitary(2, rng))
            rotated = DensityMatrix(u @ rho.mat @ u.conj().T)
            assert abs(wootters(rotated) - wootters(rho)) <= 1e-9

    def test_wrong_dimension(self):
        with pytest.raises(DimensionMismatchError):
            wootters(ghz(3).to_density())


class TestBipartite:
    def test_reduces_to_wootters(self):
        rng = np.random.default_rng(43)
        cut = Bipartition((1,), (2,))
        for _ in range(50):
            rho = DensityMatrix(random_density(2, 2, rng))
            breakdown = bipartite_concurrence(rho, cut)
            assert len(breakdown.pairs) == 1
            assert abs(breakdown.total - wootters(rho)) <= 1e-10

    def test_ghz3_cut(self):
        total = bipartite_concurrence(ghz(3).to_density(), parse_cut("12|3")).total
        assert abs(total - 1.0) < 1e-10

    def test_w3_cut(self):
        total = bipartite_concurrence(w(3).to_density(), parse_cut("12|3")).total
        assert abs(total - 2 * np.sqrt(2) / 3) < 1e-10

    @settings(max_examples=20, deadline=None)
    @given(seed=st.integers(0, 2**31 - 1), n=st.sampled_from([3, 4]))
    def test_pure_state_purity_oracle(self, seed, n):
        psi = random_pure(n, np.random.default_rng(seed))
        rho = psi.to_density()
        from oracles import all_cuts

        for block1, block2 in all_cuts(n):
            got = bipartite_concurrence(rho, Bipartition(block1, block2)).total
            assert abs(got - pure_cut_concurrence(psi.amplitudes, block1)) <= 1e-8

    def test_block_order_invariance(self):
        channels = [flip_channel("BF", p) for p in (0.15, 0.3, 0.45)]
        rho = apply(ChannelAssignment.many_sided(channels), ghz(3).to_density())
        a = bipartite_concurrence(rho, Bipartition((1, 2), (3,))).total
        b = bipartite_concurrence(rho, Bipartition((2, 1), (3,))).total
        assert abs(a - b) <= 1e-10

    def test_total_recomputes_from_pairs(self):
        rho = apply(ChannelAssignment.many_sided(
            [flip_channel("BF", 0.2)] * 3), ghz(3).to_density())
        breakdown = bipartite_concurrence(rho, parse_cut("12|3"))
        total = np.sqrt(sum(p.value ** 2 for p in breakdown.pairs))
        assert abs(breakdown.total - total) <= 1e-12

    def test_pair_indices_are_lexicographic(self):
        breakdown = bipartite_concurrence(ghz(3).to_density(), parse_cut("12|3"))
        assert [(p.m, p.n) for p in breakdown.pairs] == [(m, 1) for m in range(1, 7)]

    def test_spectral_leak_raises_when_forced(self):
        rho = ghz(3).to_density()
        with pytest.raises(SpectralLeakError):
            bipartite_concurrence(rho, parse_cut("12|3"), leak_tol=-1.0)

    def test_cut_state_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            bipartite_concurrence(ghz(3).to_density(), parse_cut("12|34"))

    def test_cut_concurrence_dispatch(self):
        rho = bell_mixture(0.8)
        assert cut_concurrence(rho, Bipartition((1,), (2,))) == wootters(rho)


class TestTau3:
    def test_ghz3_is_maximal(self):
        assert abs(tau3(ghz(3).to_density()) - 1.0) < 1e-10

    def test_fully_mixed_vanishes(self):
        assert tau3(DensityMatrix(np.eye(8, dtype=complex) / 8)) == 0.0

    def test_wrong_dimension(self):
        with pytest.raises(DimensionMismatchError):
            tau3(bell(SQ2).to_density())

    def test_symmetric_scenario_matches_single_cut(self):
        ch = flip_channel("BPF", 0.2)
        rho = apply(ChannelAssignment.many_sided([ch] * 3), ghz(3).to_density())
        single = bipartite_concurrence(rho, parse_cut("12|3")).total
        assert abs(tau3(rho) - single) <= 1e-10


class TestBipartitionParsing:
    def test_compact_and_comma_forms(self):
        assert parse_cut("12|3") == Bipartition((1, 2), (3,))
        assert parse_cut("1,2|3,4") == Bipartition((1, 2), (3, 4))

    def test_labels(self):
        assert parse_cut("12|34").label == "12|34"

    def test_dims(self):
        cut = parse_cut("123|4")
        assert cut.d1 == 8 and cut.d2 == 2

    def test_validation(self):
        with pytest.raises(ValueError):
            parse_cut("12|2")
        with pytest.raises(ValueError):
            parse_cut("123")
        with pytest.raises(ValueError):
            Bipartition((), (1,))
