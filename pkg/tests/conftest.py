import tempfile
from collections.abc import Iterator
from contextlib import ExitStack
from pathlib import Path
from unittest.mock import patch

import pytest

from zeromode.config import Config

from .utils import ConfigFactory, write_config

# Always use default config in tests


@pytest.fixture(autouse=True)
def config() -> Iterator[Config]:
    config = Config()
    with patch("zeromode.config.get_config", return_value=config):
        yield config


@pytest.fixture
def config_home_factory() -> Iterator[ConfigFactory]:
    stack = ExitStack()

    def config_home_factory(text: str) -> Path:
        root = Path(stack.enter_context(tempfile.TemporaryDirectory()))
        write_config(root, text)
        return root

    with stack:
        yield config_home_factory
