import json

import pytest

from fglab import engine, magnus, stallings
from fglab.engine import (KernelSpec, VerificationError, canonical_basis,
                          char_poly, char_poly_check, conjugation_table,
                          eigen_check, iterate, nonvanishing_check, p_vector,
                          spectral_certificate, transition_matrix,
                          verify_recurrence, witness)
from fglab.words import XY, omega, parse_word


class TestCanonicalBasis:
    def test_d3(self):
        b = canonical_basis(KernelSpec(3))
        assert [str(w) for w in b.words] == ["x^3", "y", "x y x^-1", "x^2 y x^-2"]

    def test_d2(self):
        b = canonical_basis(KernelSpec(2))
        assert [str(w) for w in b.words] == ["x^2", "y", "x y x^-1"]

    def test_d5(self):
        b = canonical_basis(KernelSpec(5))
        assert len(b.words) == 6
        assert str(b.words[0]) == "x^5"

    def test_small_modulus_rejected(self):
        with pytest.raises(ValueError):
            KernelSpec(1)


class TestConjugationTable:
    @pytest.mark.parametrize("d", range(2, 8))
    def test_cycle_structure(self, d):
        table = conjugation_table(KernelSpec(d))
        assert str(table["a"]) == "a"
        for k in range(1, d):
            assert str(table["b%d" % k]) == "b%d" % (k + 1)
        assert str(table["b%d" % d]) == "a b1 a^-1"


class TestPVector:
    def test_omega0_d3(self):
        assert p_vector(KernelSpec(3), omega(0)) == (-1, 1, 0)

    def test_omega1(self):
        assert p_vector(KernelSpec(3), omega(1)) == (-1, 2, -1)
        assert p_vector(KernelSpec(2), omega(1)) == (-2, 2)

    def test_omega0_padded_with_zeros(self):
        for d in (2, 3, 5, 7, 12):
            assert p_vector(KernelSpec(d), omega(0)) == (-1, 1) + (0,) * (d - 2)

    def test_rejects_non_kernel_words(self):
        with pytest.raises(stallings.NotInSubgroupError):
            p_vector(KernelSpec(3), parse_word("x", XY))

    def test_a_exponent_vanishes_on_witnesses(self):
        for n in range(7):
            a_sum, _ = engine.basis_exponents(KernelSpec(3), omega(n))
            assert a_sum == 0


class TestTransitionMatrix:
    def test_d2(self):
        assert transition_matrix(2) == ((1, -1), (-1, 1))

    def test_d3(self):
        assert transition_matrix(3) == ((1, 0, -1), (-1, 1, 0), (0, -1, 1))

    def test_zero_row_and_column_sums(self):
        for d in range(2, 21):
            m = transition_matrix(d)
            assert all(sum(row) == 0 for row in m)
            assert all(sum(col) == 0 for col in zip(*m))

    def test_small_modulus_rejected(self):
        with pytest.raises(ValueError):
            transition_matrix(1)


class TestIterate:
    def test_n0_is_start_vector(self):
        assert iterate(3, 0) == (-1, 1, 0)

    def test_d2_closed_form(self):
        for n in range(61):
            assert iterate(2, n) == (-(2 ** n), 2 ** n)

    def test_two_hand_multiplications(self):
        assert iterate(3, 2) == (0, 3, -3)

    def test_matches_repeated_multiplication(self):
        for d in (3, 5, 7):
            m = transition_matrix(d)
            v = engine.start_vector(d)
            for n in range(30):
                assert iterate(d, n) == v
                v = engine._mat_vec(m, v)


class TestRecurrence:
    @pytest.mark.parametrize("d,n_max", [(3, 6), (2, 8), (5, 5)])
    def test_rewriting_matches_matrix_power(self, d, n_max):
        report = verify_recurrence(KernelSpec(d), n_max)
        assert report["ok"] and report["checked"] == n_max + 1

    def test_single_step_recurrence(self):
        for d in (2, 3, 4):
            spec = KernelSpec(d)
            m = transition_matrix(d)
            for n in range(5):
                assert p_vector(spec, omega(n + 1)) == engine._mat_vec(
                    m, p_vector(spec, omega(n)))


class TestCharPoly:
    def test_d2_expansion(self):
        # (1 - t)^2 - 1 = t^2 - 2t
        assert char_poly(2) == (0, -2, 1)

    @pytest.mark.parametrize("d", range(2, 13))
    def test_matches_closed_form(self, d):
        assert char_poly_check(d)


class TestEigen:
    @pytest.mark.parametrize("d", range(2, 13))
    def test_all_pairs_verify(self, d):
        pairs = eigen_check(d)
        assert len(pairs) == d and all(p.ok for p in pairs)

    def test_last_eigenvalue_is_zero(self):
        for d in (3, 5, 8):
            pairs = eigen_check(d)
            assert pairs[-1].j == d
            assert pairs[-1].eigenvalue == (0,) * d

    def test_d3_kernel_vector_is_all_ones(self):
        pairs = eigen_check(3)
        assert pairs[-1].eigenvector == ((1, 0, 0),) * 3


class TestSpectral:
    def test_d2_alphas(self):
        report = spectral_certificate(2, 10)
        (a1, b1), (a2, b2) = report["alphas"]
        assert abs(a1 + 1) < 1e-12 and abs(b1) < 1e-12
        assert abs(a2) < 1e-12 and abs(b2) < 1e-12

    def test_d3_off_top_alpha_nonzero(self):
        assert spectral_certificate(3, 10)["max_alpha_off"] > 1e-9

    @pytest.mark.parametrize("d", range(2, 8))
    def test_reconstruction_matches_iterate(self, d):
        report = spectral_certificate(d, 20)
        assert report["ok"] and report["max_error"] <= 1e-6


class TestNonvanishing:
    def test_desk_scale(self):
        assert nonvanishing_check(3, 100)
        assert nonvanishing_check(2, 60)
        assert nonvanishing_check(6, 100)

    def test_zero_sum_conservation(self):
        for d in (2, 3, 5, 12):
            for n in (0, 1, 7, 25):
                assert sum(iterate(d, n)) == 0


class TestWitness:
    def test_d3_m2(self):
        cert = witness(3, 2)
        assert cert.witness == omega(0)
        assert cert.p_vec == (-1, 1, 0)
        assert cert.weight == 2

    def test_d2_m4(self):
        cert = witness(2, 4)
        assert cert.p_vec == (-4, 4) and cert.weight == 4

    def test_d5_m3(self):
        cert = witness(5, 3)
        assert cert.witness == omega(1)
        assert cert.p_vec == (-1, 2, -1, 0, 0) and cert.weight == 3

    def test_m_below_two_rejected(self):
        with pytest.raises(ValueError):
            witness(3, 1)

    def test_json_schema(self):
        payload = json.loads(witness(3, 2).to_json())
        assert set(payload) == {"d", "m", "witness", "p_vector", "a_sum",
                                "lcs_weight", "basis", "transversal",
                                "verdicts"}
        assert payload["witness"] == "x y x^-1 y^-1"
        assert payload["lcs_weight"] == {"cap": 3, "value": 2}
        assert payload["verdicts"] == {"in_Fm": True, "in_G2": False}
        assert payload["basis"][0] == "x^3"
        assert payload["transversal"] == ["", "x", "x^2"]

    def test_sound_against_independent_modules(self):
        cert = witness(4, 3)
        g = stallings.kernel_graph({"x": 1, "y": 0}, 4, XY)
        t = stallings.schreier_transversal(g, preferred="x")
        b = stallings.schreier_basis(g, t)
        assert not stallings.in_derived_subgroup(g, t, b, cert.witness)
        assert magnus.in_lcs(cert.witness, 3, 4)
