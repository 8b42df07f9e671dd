import socket

import numpy as np
import pytest


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def no_network(monkeypatch: pytest.MonkeyPatch) -> None:
    """ Fail any attempt to open a socket. """

    def _deny(*args, **kwargs):
        raise AssertionError("Network access attempted during an offline test.")

    monkeypatch.setattr(socket, "socket", _deny)
    monkeypatch.setattr(socket, "create_connection", _deny)
