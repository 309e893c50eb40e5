import pytest
from biunimodular.settings import DEFAULT, RELAXED, WORKERS_ENV_VAR, worker_count

worker_cases = [
    (None, None, 1),
    (None, "3", 3),
    (4, None, 4),
    (4, "2", 2),
    (1, "8", 1),
]


@pytest.mark.parametrize("requested,env,expected", worker_cases)
def test_worker_count(monkeypatch, requested, env, expected):
    if env is None:
        monkeypatch.delenv(WORKERS_ENV_VAR, raising=False)
    else:
        monkeypatch.setenv(WORKERS_ENV_VAR, env)
    assert worker_count(requested) == expected


@pytest.mark.parametrize("env", ["zero", "0", "-2"])
def test_worker_count_rejects_bad_environment(monkeypatch, env):
    monkeypatch.setenv(WORKERS_ENV_VAR, env)
    with pytest.raises(ValueError):
        worker_count()


def test_worker_count_rejects_bad_request(workers_unset):
    with pytest.raises(ValueError):
        worker_count(0)


def test_relaxed_tolerances_are_looser():
    assert RELAXED.unitarity > DEFAULT.unitarity
    assert RELAXED.rank_cutoff == DEFAULT.rank_cutoff
