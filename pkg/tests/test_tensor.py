"""Labeled tensor algebra: aligned products, sums, slices, normalization and entropy."""

import math

import numpy as np
import pytest

from hyperdual.core.exceptions import (
    DegenerateDistributionError,
    DomainError,
    FieldMismatchError,
    LabelError,
    NumericalError,
    ShapeError,
    SliceIndexError,
)
from hyperdual.core.tensor import (
    LabeledTensor,
    divide,
    entanglement_entropy,
    keep_labels,
    multiply,
    multiply_all,
    normalize,
    shannon_entropy,
    slice_tensor,
    sum_out,
)
from hyperdual.oracle import make_rng

A = [[1.0, 2.0], [3.0, 4.0]]


class TestLabeledTensor:
    def test_labels_are_sorted_with_axes(self):
        data = np.arange(6.0).reshape(2, 3)
        t = LabeledTensor((5, 1), data)
        assert t.labels == (1, 5)
        assert t.sizes == (3, 2)
        np.testing.assert_array_equal(t.data, data.T)

    def test_duplicate_labels_rejected(self):
        with pytest.raises(LabelError):
            LabeledTensor((0, 0), np.ones((2, 2)))

    def test_label_count_must_match_axes(self):
        with pytest.raises(ShapeError):
            LabeledTensor((0,), np.ones((2, 2)))

    def test_complex_data_in_real_tensor(self):
        with pytest.raises(FieldMismatchError):
            LabeledTensor((0,), [1 + 1j, 2], field="real")

    def test_from_flat_is_row_major(self):
        t = LabeledTensor.from_flat((0, 1), (2, 2), [1.0, 2.0, 3.0, 4.0])
        assert t == LabeledTensor((0, 1), A)

    def test_relabel_resorts(self):
        t = LabeledTensor((0, 1), A).relabel({0: 7})
        assert t.labels == (1, 7)
        np.testing.assert_array_equal(t.array_over((7, 1)), A)

    def test_data_is_read_only(self):
        t = LabeledTensor((0,), [1.0, 2.0])
        with pytest.raises(ValueError):
            t.data[0] = 5.0


class TestMultiply:
    def test_shared_label_is_matched(self):
        a = LabeledTensor((1, 2), A)
        b = LabeledTensor((2, 3), np.eye(2))
        product = multiply(a, b)
        assert product.labels == (1, 2, 3)
        for x1 in range(2):
            for x2 in range(2):
                for x3 in range(2):
                    assert product.data[x1, x2, x3] == A[x1][x2] * (x2 == x3)

    def test_disjoint_labels_give_outer_product(self):
        a = LabeledTensor((0,), [1.0, 2.0])
        b = LabeledTensor((1,), [3.0, 5.0, 7.0])
        np.testing.assert_array_equal(multiply(a, b).data, np.outer([1, 2], [3, 5, 7]))

    def test_scalar_factor(self):
        product = multiply(LabeledTensor.scalar(3.0), LabeledTensor((0,), [1.0, 2.0]))
        np.testing.assert_array_equal(product.data, [3.0, 6.0])

    def test_size_mismatch(self):
        with pytest.raises(ShapeError):
            multiply(LabeledTensor((0,), [1.0, 2.0]), LabeledTensor((0,), [1.0, 2.0, 3.0]))

    def test_mixed_fields(self):
        with pytest.raises(FieldMismatchError):
            multiply(LabeledTensor((0,), [1.0, 2.0]), LabeledTensor((0,), [1j, 2.0]))

    def test_empty_product_is_one(self):
        assert multiply_all([]).item() == 1.0


class TestSumsAndSlices:
    def test_sum_out(self):
        t = sum_out(LabeledTensor((0, 1), A), 0)
        assert t.labels == (1,)
        np.testing.assert_array_equal(t.data, [4.0, 6.0])

    def test_sum_out_unknown_label(self):
        with pytest.raises(LabelError):
            sum_out(LabeledTensor((0, 1), A), 3)

    def test_keep_nothing_gives_total(self):
        assert keep_labels(LabeledTensor((0, 1), A), ()).item() == 10.0

    def test_slice_keeps_label(self):
        t = slice_tensor(LabeledTensor((0, 1), A), 0, [1])
        assert t.labels == (0, 1)
        np.testing.assert_array_equal(t.data, [[3.0, 4.0]])

    @pytest.mark.parametrize("keep", [[1, 0], [0, 0]])
    def test_slice_must_increase(self, keep):
        with pytest.raises(SliceIndexError):
            slice_tensor(LabeledTensor((0, 1), A), 0, keep)

    def test_slice_out_of_range(self):
        with pytest.raises(SliceIndexError):
            slice_tensor(LabeledTensor((0, 1), A), 1, [2])

    def test_empty_slice(self):
        with pytest.raises(DomainError):
            slice_tensor(LabeledTensor((0, 1), A), 1, [])


class TestDivideAndNormalize:
    def test_zero_over_zero_is_zero(self):
        q = divide(LabeledTensor((0,), [0.0, 6.0]), LabeledTensor((0,), [0.0, 3.0]))
        np.testing.assert_array_equal(q.data, [0.0, 2.0])

    def test_nonzero_over_zero(self):
        with pytest.raises(NumericalError):
            divide(LabeledTensor((0,), [1.0, 6.0]), LabeledTensor((0,), [0.0, 3.0]))

    def test_normalize_returns_z(self):
        t, z = normalize(LabeledTensor((0, 1), A))
        assert z == 10.0
        np.testing.assert_allclose(t.data, np.asarray(A) / 10.0)

    def test_all_zero_is_degenerate(self):
        with pytest.raises(DegenerateDistributionError):
            normalize(LabeledTensor((0,), [0.0, 0.0]))

    def test_negative_entries_are_not_a_distribution(self):
        with pytest.raises(DomainError):
            normalize(LabeledTensor((0,), [-1.0, 2.0]))

    def test_complex_normalization_without_probability(self):
        t, z = normalize(LabeledTensor((0,), [1j, 1.0]), probability=False)
        assert z == 1 + 1j
        assert abs(t.total() - 1.0) < 1e-12


class TestEntropy:
    @pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
    def test_uniform_gives_log_n(self, n):
        t = LabeledTensor((0,), np.full(n, 1.0 / n))
        assert abs(shannon_entropy(t) - math.log(n)) <= 1e-12

    def test_zero_entries_contribute_nothing(self):
        t = LabeledTensor((0,), [0.5, 0.0, 0.5])
        assert shannon_entropy(t) == pytest.approx(math.log(2), abs=1e-12)

    def test_must_sum_to_one(self):
        with pytest.raises(DomainError):
            shannon_entropy(LabeledTensor((0,), [0.5, 0.6]))

    def test_complex_rejected(self):
        with pytest.raises(DomainError):
            shannon_entropy(LabeledTensor((0,), [0.5 + 0j, 0.5], field="complex"))

    def test_entanglement_entropy_matches_shannon(self):
        rng = make_rng(0)
        for _ in range(100):
            shape = tuple(int(n) for n in rng.integers(1, 4, size=int(rng.integers(1, 4))))
            data = rng.random(shape)
            t = LabeledTensor(range(len(shape)), data / data.sum())
            assert entanglement_entropy(t) == shannon_entropy(t)
