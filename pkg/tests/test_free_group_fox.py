"""
Tests for free words, the Artin action, Fox calculus and group-ring traces.
"""

import itertools

import pytest

from core.errors import DomainError, GeneratorIndexError, ResourceGuardError
from services.braid_core import BraidWord, compose, random_braid
from services.free_group_fox import (
    BraidAutomorphism,
    FreeWord,
    GroupRingElement,
    GroupRingMatrix,
    abelianize,
    apply_automorphism,
    artin_image,
    fox_derivative,
    fox_fundamental_residual,
    fox_jacobian_chain,
    fox_matrix,
    multiply,
    norm,
    random_free_word,
    zeta1_trace_data,
    zeta1_trace_explicit,
)
from services.laurent import LaurentPoly


def word(n, *letters):
    return FreeWord(n, tuple(letters))


def element(n, *letters, coeff=1, z_exp=0):
    return GroupRingElement.of_word(word(n, *letters), coeff, z_exp)


def all_braids(n, max_length):
    alphabet = [g for i in range(1, n) for g in (i, -i)]
    for length in range(max_length + 1):
        for letters in itertools.product(alphabet, repeat=length):
            yield BraidWord(n, letters)


# ============================================================================
# Free words and the Artin action
# ============================================================================

@pytest.mark.unit
class TestArtinAction:
    """Tests for free words and braid automorphisms."""

    def test_words_reduce(self):
        """Test construction cancels adjacent inverse pairs."""
        assert word(3, 1, 2, -2, 3).letters == (1, 3)

    def test_generator_out_of_range(self):
        """Test letters beyond n are rejected."""
        with pytest.raises(GeneratorIndexError):
            word(2, 3)

    def test_identity_images(self):
        """Test the identity braid fixes every generator."""
        assert artin_image(BraidWord.identity(3)) == [word(3, 1), word(3, 2), word(3, 3)]

    def test_sigma1_images(self):
        """Test sigma_1 sends x1 to x1 x2 x1^-1 and x2 to x1."""
        assert artin_image(BraidWord(2, (1,))) == [word(2, 1, 2, -1), word(2, 1)]

    def test_inverse_letter_undoes_generator(self):
        """Test sigma_i^-1 sigma_i acts trivially."""
        assert artin_image(BraidWord(4, (-2, 2))) == artin_image(BraidWord.identity(4))

    def test_boundary_word_fixed(self):
        """Test x1 x2 ... xn is fixed by every short braid in B_3."""
        boundary = word(3, 1, 2, 3)
        for b in all_braids(3, 4):
            assert apply_automorphism(artin_image(b), boundary) == boundary

    def test_boundary_word_fixed_long_braids(self, rng):
        """Test x1 x2 ... xn is fixed by random braids of length 5 to 20."""
        for _ in range(50):
            n = rng.randint(2, 5)
            boundary = word(n, *range(1, n + 1))
            b = random_braid(n, rng.randint(5, 20), rng)
            assert apply_automorphism(artin_image(b), boundary) == boundary

    def test_braid_relations(self):
        """Test both braid relations hold on images for n up to 5."""
        for n in range(2, 6):
            for i in range(1, n - 1):
                assert artin_image(BraidWord(n, (i, i + 1, i))) == artin_image(
                    BraidWord(n, (i + 1, i, i + 1))
                )
            for i in range(1, n):
                for j in range(i + 2, n):
                    assert artin_image(BraidWord(n, (i, j))) == artin_image(BraidWord(n, (j, i)))

    def test_composition_order(self, rng):
        """Test images of ab are a applied to the images of b."""
        for _ in range(20):
            a = random_braid(4, 5, rng)
            b = random_braid(4, 5, rng)
            images_a = artin_image(a)
            expected = [apply_automorphism(images_a, w) for w in artin_image(b)]
            assert artin_image(compose(a, b)) == expected

    def test_random_free_word(self, rng):
        """Test random free words are reduced and of the requested length."""
        w = random_free_word(3, 15, rng)
        assert len(w) == 15


# ============================================================================
# Group ring arithmetic
# ============================================================================

@pytest.mark.unit
class TestGroupRing:
    """Tests for Z[Gamma] elements."""

    def test_norm_collects(self):
        """Test ||2 x1 - 3 x2 + x1|| = 6."""
        u = element(2, 1, coeff=2) + element(2, 2, coeff=-3) + element(2, 1)
        assert norm(u) == 6

    def test_free_cancellation(self):
        """Test x1 * x1^-1 = 1."""
        assert element(2, 1) * element(2, -1) == GroupRingElement.one(2)

    def test_twisted_product(self):
        """Test (z x2)(z x1) = z^2 f(x2) x1 = z^2 x1 x1 for sigma_1."""
        action = BraidAutomorphism(BraidWord(2, (1,)))
        product = multiply(element(2, 2, z_exp=1), element(2, 1, z_exp=1), action)
        assert product == element(2, 1, 1, z_exp=2)

    def test_negative_twist_uses_inverse(self):
        """Test u z^-1 moves u through the inverse automorphism."""
        action = BraidAutomorphism(BraidWord(2, (1,)))
        product = multiply(element(2, 1), element(2, z_exp=-1), action)
        assert product == element(2, 2, z_exp=-1)

    def test_z_without_action(self):
        """Test z-powers on the right need the automorphism."""
        with pytest.raises(DomainError):
            multiply(element(2, 1), element(2, 1, z_exp=1))

    def test_norm_inequalities(self, rng):
        """Test the norm is submultiplicative and subadditive."""
        for _ in range(50):
            u = sum(
                (element(3, *random_free_word(3, rng.randint(0, 4), rng).letters, coeff=rng.randint(-3, 3))
                 for _ in range(4)),
                GroupRingElement.zero(3),
            )
            v = sum(
                (element(3, *random_free_word(3, rng.randint(0, 4), rng).letters, coeff=rng.randint(-3, 3))
                 for _ in range(4)),
                GroupRingElement.zero(3),
            )
            assert norm(u * v) <= norm(u) * norm(v)
            assert norm(u + v) <= norm(u) + norm(v)
            assert abelianize(u).norm() <= norm(u)

    def test_abelianize(self):
        """Test 1 - x1 x2 x1^-1 maps to 1 - t."""
        u = GroupRingElement.one(2) - element(2, 1, 2, -1)
        t = LaurentPoly.variable(0, 1)
        assert abelianize(u) == 1 - t


# ============================================================================
# Fox calculus
# ============================================================================

@pytest.mark.unit
class TestFoxCalculus:
    """Tests for Fox derivatives and Jacobians."""

    def test_derivative_examples(self):
        """Test derivatives of x1 x2 x1^-1."""
        w = word(2, 1, 2, -1)
        assert fox_derivative(w, 1) == GroupRingElement.one(2) - element(2, 1, 2, -1)
        assert fox_derivative(w, 2) == element(2, 1)

    def test_derivative_of_inverse(self):
        """Test d(x1^-1)/dx1 = -x1^-1."""
        assert fox_derivative(word(2, -1), 1) == element(2, -1, coeff=-1)

    def test_derivative_index_range(self):
        """Test the derivative index must be within 1..n."""
        with pytest.raises(GeneratorIndexError):
            fox_derivative(word(2, 1), 3)

    def test_fundamental_identity(self, rng):
        """Test sum_i (dw/dx_i)(x_i - 1) = w - 1 on random words."""
        for _ in range(200):
            w = random_free_word(rng.randint(1, 4), rng.randint(0, 12), rng)
            assert fox_fundamental_residual(w).is_zero()

    def test_identity_matrix(self):
        """Test the identity braid has the identity Jacobian."""
        assert fox_matrix(BraidWord.identity(3)) == GroupRingMatrix.identity(3)

    def test_sigma1_matrix(self):
        """Test the Jacobian of sigma_1 in B_2."""
        m = fox_matrix(BraidWord(2, (1,)))
        assert m[0, 0] == GroupRingElement.one(2) - element(2, 1, 2, -1)
        assert m[0, 1] == GroupRingElement.one(2)
        assert m[1, 0] == element(2, 1)
        assert m[1, 1].is_zero()

    def test_chain_rule(self, rng):
        """Test the Jacobian of ab from the Jacobians of a and b."""
        for _ in range(20):
            n = rng.randint(2, 4)
            a = random_braid(n, rng.randint(0, 4), rng)
            b = random_braid(n, rng.randint(0, 4), rng)
            assert fox_jacobian_chain(a, b) == fox_matrix(compose(a, b))

    def test_abelianized_sigma1(self):
        """Test abelianizing the Jacobian of sigma_1 gives unreduced Burau."""
        t = LaurentPoly.variable(0, 1)
        assert fox_matrix(BraidWord(2, (1,))).abelianize() == [[1 - t, LaurentPoly.constant(1)], [t, LaurentPoly.zero(1)]]


# ============================================================================
# Group-ring traces
# ============================================================================

@pytest.mark.unit
class TestZeta1Traces:
    """Tests for trace data of the twisted Fox matrix of beta^k."""

    def test_identity_braid(self):
        """Test the identity braid gives n at every k."""
        rows = zeta1_trace_data(BraidWord.identity(3), 3)
        assert [row.trace_of_norms for row in rows] == [3, 3, 3]
        assert [row.norm_of_collected_trace for row in rows] == [3, 3, 3]

    def test_sigma1_first_power(self):
        """Test sigma_1 in B_2 has trace data 2 and 2 at k = 1."""
        row = zeta1_trace_data(BraidWord(2, (1,)), 1)[0]
        assert row.k == 1
        assert row.trace_of_norms == 2
        assert row.norm_of_collected_trace == 2

    def test_fast_path_matches_explicit(self, pa_braid, rng):
        """Test prefix collection agrees with building the full matrices."""
        assert zeta1_trace_data(pa_braid, 4) == zeta1_trace_explicit(pa_braid, 4)
        for _ in range(5):
            b = random_braid(rng.randint(3, 4), rng.randint(1, 4), rng)
            assert zeta1_trace_data(b, 3) == zeta1_trace_explicit(b, 3)

    def test_collected_below_trace_of_norms(self, pa_braid):
        """Test collecting never increases the norm."""
        for row in zeta1_trace_data(pa_braid, 8):
            assert row.norm_of_collected_trace <= row.trace_of_norms

    def test_kmax_must_be_positive(self, pa_braid):
        """Test kmax below 1 is rejected."""
        with pytest.raises(DomainError):
            zeta1_trace_data(pa_braid, 0)

    def test_term_cap(self, pa_braid):
        """Test the term guard aborts long computations."""
        with pytest.raises(ResourceGuardError):
            zeta1_trace_data(pa_braid, 12, term_cap=100)

    @pytest.mark.slow
    def test_growth_rate(self, pa_braid, golden_squared):
        """Test successive ratios approach the dilatation."""
        rows = zeta1_trace_data(pa_braid, 12)
        ratios = [b.trace_of_norms / a.trace_of_norms for a, b in zip(rows, rows[1:])]
        assert ratios[-1] == pytest.approx(golden_squared, rel=0.05)
