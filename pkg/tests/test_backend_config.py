import logging

import pytest

from backend.backend_config import threads_from_env


@pytest.mark.parametrize('raw, expected', [(None, 1), ('', 1), (' ', 1), ('4', 4), ('0', 1), ('-3', 1)])
def test_threads_from_env(raw, expected):
    assert threads_from_env(raw) == expected


def test_threads_from_env_warns_on_non_integers(caplog):
    with caplog.at_level(logging.WARNING, logger='backend.backend_config'):
        assert threads_from_env('four') == 1
        assert threads_from_env('2.5') == 1
    assert 'CUSPCOUNT_THREADS' in caplog.text
