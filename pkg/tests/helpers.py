import numpy as np

from hyperdual.core.tensor import LabeledTensor


def assert_tensor_close(actual: LabeledTensor, expected: LabeledTensor, rtol: float = 1e-10, atol: float = 0.0) -> None:
    assert actual.labels == expected.labels
    assert actual.sizes == expected.sizes
    np.testing.assert_allclose(actual.data, expected.data, rtol=rtol, atol=atol)
