import logging

import pytest
from biunimodular.settings import worker_count

logging.basicConfig()
logging.getLogger("biunimodular").setLevel(logging.INFO)


@pytest.fixture(scope="session")
def workers():
    # BIUNI_WORKERS caps the pool; default to four threads otherwise
    return worker_count(4)
