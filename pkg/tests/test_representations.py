"""
Tests for Burau, Lawrence-Krammer-Bigelow and Fox-specialized matrices.
"""

import itertools

import pytest

from core.errors import DomainError
from domain.enums import RepresentationKind
from services.braid_core import BraidWord, compose, inverse, random_braid
from services.free_group_fox import artin_image, fox_matrix
from services.laurent import LaurentMatrix, LaurentPoly
from services.representations import (
    burau_reduced,
    burau_transpose_variant,
    dim_basis,
    expected_dim,
    generator_matrix,
    lkb_basis,
    lkb_matrix,
    represent,
    specialize_fox,
)
from services.spectral_growth import spectral_radius, torus_sup_sr

ALL_KINDS = list(RepresentationKind)


def reduced_words(n, max_length):
    alphabet = [g for i in range(1, n) for g in (i, -i)]
    for length in range(1, max_length + 1):
        for letters in itertools.product(alphabet, repeat=length):
            if all(a != -b for a, b in zip(letters, letters[1:])):
                yield BraidWord(n, letters)


# ============================================================================
# Dimensions
# ============================================================================

@pytest.mark.unit
class TestDimensions:
    """Tests for basis sizes."""

    def test_dim_basis_examples(self):
        """Test C(n+m-2, m) on small cases."""
        assert dim_basis(3, 1) == 2
        assert dim_basis(4, 2) == 6
        assert dim_basis(2, 5) == 1
        assert dim_basis(5, 0) == 1

    def test_dim_basis_domain(self):
        """Test n < 2 or m < 0 is rejected."""
        with pytest.raises(DomainError):
            dim_basis(1, 1)
        with pytest.raises(DomainError):
            dim_basis(3, -1)

    def test_matrix_shapes(self):
        """Test each kind has the expected dimension."""
        b = BraidWord(4, (1, -3, 2))
        for kind in ALL_KINDS:
            assert represent(kind, b).matrix.shape == (expected_dim(kind, 4),) * 2
        assert len(lkb_basis(4)) == 6


# ============================================================================
# Burau
# ============================================================================

@pytest.mark.unit
class TestBurau:
    """Tests for the reduced Burau representation."""

    def test_identity(self):
        """Test the identity braid maps to the identity matrix."""
        assert burau_reduced(BraidWord.identity(3)).matrix == LaurentMatrix.identity(2)

    def test_generators(self):
        """Test the generator matrices of B_3."""
        t = LaurentPoly.variable(0, 1)
        assert burau_reduced(BraidWord(3, (1,))).matrix == LaurentMatrix.from_rows([[-t, 1], [0, 1]])
        assert burau_reduced(BraidWord(3, (2,))).matrix == LaurentMatrix.from_rows([[1, 0], [t, -t]])

    def test_braid_relation_value(self):
        """Test sigma_1 sigma_2 sigma_1 = [[0, -t], [-t^2, 0]]."""
        t = LaurentPoly.variable(0, 1)
        expected = LaurentMatrix.from_rows([[0, -t], [-(t * t), 0]])
        assert burau_reduced(BraidWord(3, (1, 2, 1))).matrix == expected
        assert burau_reduced(BraidWord(3, (2, 1, 2))).matrix == expected

    def test_value_at_minus_one(self, pa_braid, golden_squared):
        """Test sigma_1 sigma_2^-1 at t = -1 is [[2, 1], [1, 1]]."""
        at_minus1 = burau_reduced(pa_braid).matrix.substitute_integers([-1])
        assert at_minus1 == [[2, 1], [1, 1]]
        assert spectral_radius(at_minus1) == pytest.approx(golden_squared, abs=1e-9)

    def test_transpose_variant_same_sup(self, rng):
        """Test the transposed variant has the same grid supremum."""
        for _ in range(5):
            b = random_braid(3, rng.randint(1, 6), rng)
            a = torus_sup_sr(burau_reduced(b).matrix, grid=64, refine_rounds=0)
            c = torus_sup_sr(burau_transpose_variant(b).matrix, grid=64, refine_rounds=0)
            assert a.sup_value == pytest.approx(c.sup_value, abs=1e-9)


# ============================================================================
# Homomorphism and relations, every kind
# ============================================================================

@pytest.mark.unit
class TestHomomorphism:
    """Tests that every representation respects the group structure."""

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_products(self, kind, rng):
        """Test rep(ab) = rep(a) rep(b)."""
        for _ in range(10):
            n = rng.randint(2, 4)
            a = random_braid(n, rng.randint(0, 4), rng)
            b = random_braid(n, rng.randint(0, 4), rng)
            assert represent(kind, compose(a, b)).matrix == (
                represent(kind, a).matrix @ represent(kind, b).matrix
            )

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_inverse_law(self, kind, rng):
        """Test rep(a^-1) rep(a) is the identity."""
        for _ in range(5):
            n = rng.randint(2, 4)
            a = random_braid(n, rng.randint(1, 5), rng)
            product = represent(kind, inverse(a)).matrix @ represent(kind, a).matrix
            assert product == LaurentMatrix.identity(expected_dim(kind, n), product.var_count)

    @pytest.mark.parametrize("kind", ALL_KINDS)
    def test_braid_relations(self, kind):
        """Test both braid relations for n up to 5."""
        for n in range(2, 6):
            for i in range(1, n - 1):
                left = represent(kind, BraidWord(n, (i, i + 1, i))).matrix
                right = represent(kind, BraidWord(n, (i + 1, i, i + 1))).matrix
                assert left == right
            for i in range(1, n):
                for j in range(i + 2, n):
                    left = represent(kind, BraidWord(n, (i, j))).matrix
                    right = represent(kind, BraidWord(n, (j, i))).matrix
                    assert left == right

    def test_generator_inverse(self):
        """Test cached inverse generators are exact."""
        for n in (3, 4):
            for i in range(1, n):
                for kind in (RepresentationKind.BURAU, RepresentationKind.LKB):
                    product = generator_matrix(kind, n, -i) @ generator_matrix(kind, n, i)
                    assert product == LaurentMatrix.identity(product.shape[0], product.var_count)

    def test_fox_has_no_generator_matrices(self):
        """Test per-letter matrices are not defined for the fox kind."""
        with pytest.raises(DomainError):
            generator_matrix(RepresentationKind.FOX, 3, 1)


# ============================================================================
# Lawrence-Krammer-Bigelow
# ============================================================================

@pytest.mark.unit
class TestLKB:
    """Tests for the two-variable LKB representation."""

    def test_identity(self):
        """Test the identity braid of B_3 maps to the 3 x 3 identity."""
        assert lkb_matrix(BraidWord.identity(3)).matrix == LaurentMatrix.identity(3, 2)

    def test_variables(self, pa_braid):
        """Test LKB matrices are over q and t."""
        bundle = lkb_matrix(pa_braid)
        assert bundle.variables == ["q", "t"]
        assert bundle.var_count == 2

    def test_faithful_on_short_words_b3(self):
        """Test reduced words of length <= 4 in B_3 map to the identity only if they act trivially."""
        identity = LaurentMatrix.identity(3, 2)
        trivial_action = artin_image(BraidWord.identity(3))
        for b in reduced_words(3, 4):
            assert (lkb_matrix(b).matrix == identity) == (artin_image(b) == trivial_action)

    @pytest.mark.slow
    def test_faithful_on_short_words_b4(self):
        """Test reduced words of length <= 4 in B_4 map to the identity only if they act trivially."""
        identity = LaurentMatrix.identity(6, 2)
        trivial_action = artin_image(BraidWord.identity(4))
        trivial_words = []
        for b in reduced_words(4, 4):
            acts_trivially = artin_image(b) == trivial_action
            assert (lkb_matrix(b).matrix == identity) == acts_trivially
            if acts_trivially:
                trivial_words.append(b.letters)
        assert (1, 3, -1, -3) in trivial_words


# ============================================================================
# Fox specialization
# ============================================================================

@pytest.mark.unit
class TestFoxSpecialization:
    """Tests for the abelianized Fox matrix."""

    def test_sigma1(self):
        """Test sigma_1 in B_2 gives [[1 - t, 1], [t, 0]]."""
        t = LaurentPoly.variable(0, 1)
        assert specialize_fox(BraidWord(2, (1,))).matrix == LaurentMatrix.from_rows([[1 - t, 1], [t, 0]])

    def test_specialization_never_increases_norms(self, rng):
        """Test ||specialized entry|| <= ||group-ring entry|| cell by cell."""
        for _ in range(20):
            b = random_braid(3, rng.randint(0, 8), rng)
            exact = fox_matrix(b)
            specialized = specialize_fox(b).matrix
            for i in range(3):
                for j in range(3):
                    assert specialized[i, j].norm() <= exact[i, j].norm()

    def test_sup_matches_reduced_burau(self, rng):
        """Test the unreduced and reduced grid suprema agree."""
        for _ in range(20):
            b = random_braid(3, rng.randint(1, 8), rng)
            unreduced = torus_sup_sr(specialize_fox(b).matrix, grid=64, refine_rounds=0)
            reduced = torus_sup_sr(burau_reduced(b).matrix, grid=64, refine_rounds=0)
            assert unreduced.sup_value == pytest.approx(max(reduced.sup_value, 1.0), abs=1e-6)
