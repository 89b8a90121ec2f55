import math

import numpy as np
import pytest

from stickfrag import (
    MEASURE_LENGTH,
    MEASURE_UNIFORM,
    ProportionVector,
    ResourceLimitError,
    atom_for,
    composition_count,
    compositions,
    distribution_from_residues,
    exact_distribution,
    log_multinomial,
    make_model,
    rotate_distribution,
    write_distribution_csv,
)
from stickfrag.enumeration import composition_array


def exact_multinomial(N, k):
    """Independent oracle: integer factorial arithmetic."""
    v = math.factorial(N)
    for kj in k:
        v //= math.factorial(kj)
    return v


class TestCompositions:
    def test_order_n2_m3(self):
        # frozen stream order (first part descending)
        assert [c.k for c in compositions(2, 3)] == [
            (2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2),
        ]

    def test_n0(self):
        assert [c.k for c in compositions(0, 2)] == [(0, 0)]

    def test_errors(self):
        with pytest.raises(ValueError):
            list(compositions(2, 1))
        with pytest.raises(ValueError):
            list(compositions(-1, 2))

    @pytest.mark.parametrize(
        "N,m",
        [(50, 2), (50, 3), (30, 4), (15, 5), (10, 6), (0, 4), (1, 6)],
    )
    def test_count_matches_binomial(self, N, m):
        comps = list(compositions(N, m))
        assert len(comps) == composition_count(N, m) == math.comb(N + m - 1, m - 1)
        seen = set(c.k for c in comps)
        assert len(seen) == len(comps)
        assert all(sum(c.k) == N for c in comps)

    def test_count_example_n1000_m3(self):
        assert composition_count(1000, 3) == math.comb(1002, 2) == 501501

    @pytest.mark.parametrize("N,m", [(6, 2), (5, 3), (4, 4), (3, 5), (0, 3)])
    def test_array_matches_stream(self, N, m):
        arr = composition_array(N, m)
        assert arr.tolist() == [list(c.k) for c in compositions(N, m)]


class TestLogMultinomial:
    def test_examples(self):
        assert math.isclose(log_multinomial(4, (2, 1, 1)), math.log(12), rel_tol=1e-12)
        assert log_multinomial(5, (5, 0, 0)) == 0.0
        assert math.isclose(log_multinomial(2, (1, 1)), math.log(2), rel_tol=1e-12)

    def test_against_integer_factorials(self):
        for N in range(0, 21, 4):
            for c in compositions(N, 3):
                expected = math.log(exact_multinomial(N, c.k))
                got = log_multinomial(N, c)
                assert got == pytest.approx(expected, rel=1e-10, abs=1e-12)

    def test_rejects_non_composition(self):
        with pytest.raises(ValueError):
            log_multinomial(4, (2, 1))
        with pytest.raises(ValueError):
            log_multinomial(4, (-1, 5))


class TestAtomFor:
    def test_half_model_single_cut(self):
        r, lu, ll = atom_for(make_model([0.5]), (1, 0))
        # oracle: frac(log10 0.5) evaluated directly
        assert r == pytest.approx(math.log10(0.5) + 1.0, abs=1e-15)
        assert r == pytest.approx(0.6989700043360188, abs=1e-12)

    def test_zero_composition(self):
        r, lu, ll = atom_for(make_model([0.3, 0.3]), (0, 0, 0))
        assert (r, lu, ll) == (0.0, 0.0, 0.0)

    def test_length_mass_example(self):
        _, _, ll = atom_for(make_model([0.3, 0.3]), (1, 1, 0))
        assert ll == pytest.approx(math.log(2) + math.log(0.09), abs=1e-12)

    def test_mismatched_m(self):
        with pytest.raises(ValueError):
            atom_for(make_model([0.5]), (1, 0, 0))

    def test_factorization_identity(self):
        # sum k_j log p_j == k1 log(p1/p2) + (k1+k2) log(p2/p3) + ... + N log pm
        rng = np.random.default_rng(5)
        for _ in range(25):
            m = int(rng.integers(2, 6))
            p = rng.dirichlet(np.ones(m))
            model = ProportionVector(tuple(p))
            N = int(rng.integers(0, 40))
            k = rng.multinomial(N, np.ones(m) / m)
            direct = sum(int(kj) * math.log10(pj) for kj, pj in zip(k, model.p))
            partial = np.cumsum(k)[:-1]
            tele = sum(
                s * math.log10(model.p[i] / model.p[i + 1]) for i, s in enumerate(partial)
            ) + N * math.log10(model.p[-1])
            assert direct == pytest.approx(tele, abs=1e-9)


class TestExactDistribution:
    def test_half_model_one_stage(self):
        d = exact_distribution(make_model([0.5]), 1)
        assert d.atoms == 1
        assert d.residues[0] == pytest.approx(0.6989700043360188, abs=1e-12)
        assert d.masses[0] == pytest.approx(1.0, abs=1e-15)

    def test_n0_single_atom(self):
        d = exact_distribution(make_model([0.3, 0.3]), 0)
        assert d.atoms == 1 and d.residues[0] == 0.0 and d.masses[0] == 1.0

    @pytest.mark.parametrize("measure", [MEASURE_UNIFORM, MEASURE_LENGTH])
    def test_mass_normalization(self, measure):
        rng = np.random.default_rng(17)
        for _ in range(8):
            m = int(rng.integers(2, 5))
            N = int(rng.integers(0, 201 if m < 4 else 101))
            model = ProportionVector(tuple(rng.dirichlet(np.ones(m))))
            d = exact_distribution(model, N, measure=measure)
            assert abs(d.total_mass() - 1.0) <= 1e-10

    def test_binomial_weights_m2(self):
        # uniform measure reproduces C(N,k)/2^N; oracle is exact integer comb
        N = 50
        model = make_model([0.3])
        d = exact_distribution(model, N, measure=MEASURE_UNIFORM)
        logp = [math.log10(p) for p in model.p]
        expected = sorted(
            ((k * logp[0] + (N - k) * logp[1]) % 1.0, math.comb(N, k) / 2.0**N)
            for k in range(N + 1)
        )
        assert d.atoms == N + 1
        for (r_exp, m_exp), r_got, m_got in zip(expected, d.residues, d.masses):
            assert r_got == pytest.approx(r_exp, abs=1e-9)
            assert m_got == pytest.approx(m_exp, rel=1e-10)

    def test_length_measure_is_multinomial_probability(self):
        # oracle: exact integer multinomial times p^k per composition
        model = make_model([0.2, 0.5])
        N = 9
        d = exact_distribution(model, N, measure=MEASURE_LENGTH)
        acc = {}
        for c in compositions(N, 3):
            r, _, _ = atom_for(model, c)
            w = exact_multinomial(N, c.k) * math.prod(p**kj for p, kj in zip(model.p, c.k))
            key = round(r, 9)
            acc[key] = acc.get(key, 0.0) + w
        expected = sorted(acc.items())
        assert d.atoms == len(expected)
        for (r_exp, m_exp), r_got, m_got in zip(expected, d.residues, d.masses):
            assert r_got == pytest.approx(r_exp, abs=1e-9)
            assert m_got == pytest.approx(m_exp, rel=1e-10)

    def test_permutation_leaves_atoms_unchanged(self):
        rng = np.random.default_rng(23)
        model = ProportionVector(tuple(rng.dirichlet(np.ones(3))))
        d1 = exact_distribution(model, 12)
        d2 = exact_distribution(model.permuted((2, 0, 1)), 12)
        assert d1.atoms == d2.atoms
        assert np.allclose(d1.residues, d2.residues, atol=1e-9)
        assert np.allclose(d1.masses, d2.masses, atol=1e-12)

    def test_resource_cap(self):
        with pytest.raises(ResourceLimitError):
            exact_distribution(make_model([0.3, 0.3]), 100, cap=1000)

    def test_merging_tolerance(self):
        d = distribution_from_residues(
            np.array([0.5, 0.5 + 5e-13, 0.25, 0.5 - 4e-13]), MEASURE_UNIFORM, 1, 2
        )
        assert d.atoms == 2
        assert d.masses[1] == pytest.approx(0.75)

    def test_wrap_snap_near_one(self):
        d = distribution_from_residues(np.array([1.0 - 1e-13, 2e-13]), MEASURE_UNIFORM, 1, 2)
        assert d.atoms == 1
        assert d.residues[0] == pytest.approx(0.0, abs=1e-12)

    def test_threads_match_canonical(self):
        model = make_model([0.3, 0.2])
        d1 = exact_distribution(model, 120, threads=1)
        d2 = exact_distribution(model, 120, threads=3)
        assert np.array_equal(d1.residues, d2.residues)
        assert np.array_equal(d1.masses, d2.masses)

    def test_atoms_match_atom_for(self):
        model = make_model([0.25, 0.35])
        N = 7
        d = exact_distribution(model, N, measure=MEASURE_LENGTH)
        raw = [atom_for(model, c) for c in compositions(N, 3)]
        total = math.fsum(math.exp(ll) for _, _, ll in raw)
        assert total == pytest.approx(1.0, abs=1e-12)
        for r, _, ll in raw:
            i = int(np.argmin(np.abs(d.residues - r)))
            assert abs(d.residues[i] - r) < 1e-9


class TestRotation:
    def test_round_trip(self):
        d = exact_distribution(make_model([0.3, 0.2]), 20)
        r = rotate_distribution(rotate_distribution(d, 0.3), -0.3)
        assert np.allclose(r.residues, d.residues, atol=1e-12)
        assert np.allclose(r.masses, d.masses, atol=1e-15)

    def test_mass_conserved(self):
        d = exact_distribution(make_model([0.3, 0.2]), 20)
        r = rotate_distribution(d, math.pi / 10)
        assert abs(r.total_mass() - 1.0) <= 1e-10


class TestCsv:
    def test_format_and_determinism(self, tmp_path):
        d = exact_distribution(make_model([0.3]), 5)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_distribution_csv(d, a)
        write_distribution_csv(d, b)
        text = a.read_text()
        lines = text.strip().split("\n")
        assert lines[0] == "residue,mass"
        assert len(lines) == d.atoms + 1
        assert text == b.read_text()
        # 17 significant digits round-trip
        r0 = float(lines[1].split(",")[0])
        assert r0 == d.residues[0]
