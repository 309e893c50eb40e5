import pytest
from biunimodular.utils._parallel import first_in_batches, parallel_map


@pytest.mark.parametrize("workers", [1, 3])
def test_parallel_map_keeps_order(workers):
    assert parallel_map(lambda x: x * x, list(range(10)), workers) == [x * x for x in range(10)]


@pytest.mark.parametrize("workers", [1, 2, 4])
def test_first_in_batches_picks_lowest_index(workers):
    index, results = first_in_batches(lambda i: i, 20, lambda r: r in (5, 6), workers)
    assert index == 5
    assert results == list(range(6))


def test_first_in_batches_without_acceptance():
    index, results = first_in_batches(lambda i: i, 4, lambda r: False, 2)
    assert index is None
    assert results == [0, 1, 2, 3]


def test_parallel_map_raises_worker_errors():
    def fail(x):
        raise RuntimeError(f"bad item {x}")

    with pytest.raises(RuntimeError):
        parallel_map(fail, [1, 2], 2)
