import logging

import pytest
from biunimodular.experiments import BenchConfig, run_bench

from .param import BenchParam

logger = logging.getLogger(__name__)

bench_list: list[BenchParam] = [
    {"dim": 3, "max_avg_starts": 1.5},
    {"dim": 5, "max_avg_starts": 1.6},
    {"dim": 10, "max_avg_starts": 1.8},
    {"dim": 25, "max_avg_starts": 3.0},
]


@pytest.mark.parametrize("case", bench_list)
def test_random_matrices_need_few_starts(case, workers):
    cfg = BenchConfig(
        dims=(case["dim"],),
        matrices_per_dim=100,
        delta=1e-10,
        max_starts=1_000,
        max_iters=10_000,
        workers=workers,
    )
    row = run_bench(cfg).rows[0]
    logger.info(f"dim={row.dim}: avg starts {row.avg_starts:.4f}, max {row.max_starts_used}")

    assert row.successes == 100
    assert row.avg_starts <= case["max_avg_starts"]
