from __future__ import annotations

import os
from unittest.mock import patch

import pytest

from confkey.core import settings
from confkey.core.errors import ConfigError


class TestEnvInt:
    def test_default_when_unset(self):
        with patch.dict(os.environ, {}, clear=False):
            os.environ.pop("CONFKEY_TEST_INT", None)
            assert settings._env_int("CONFKEY_TEST_INT", 17) == 17

    def test_reads_value(self):
        with patch.dict(os.environ, {"CONFKEY_TEST_INT": "250"}):
            assert settings._env_int("CONFKEY_TEST_INT", 17) == 250

    def test_blank_means_default(self):
        with patch.dict(os.environ, {"CONFKEY_TEST_INT": "  "}):
            assert settings._env_int("CONFKEY_TEST_INT", 17) == 17

    def test_malformed_names_the_variable(self):
        with patch.dict(os.environ, {"CONFKEY_TEST_INT": "many"}):
            with pytest.raises(ConfigError, match="CONFKEY_TEST_INT"):
                settings._env_int("CONFKEY_TEST_INT", 17)


class TestCheckStates:
    @pytest.mark.parametrize("value", ["1", "true", "YES", "on"])
    def test_enabled(self, value):
        with patch.dict(os.environ, {"CONFKEY_CHECK_STATES": value}):
            assert settings.check_states() is True

    def test_disabled_by_default(self):
        with patch.dict(os.environ, {"CONFKEY_CHECK_STATES": ""}):
            assert settings.check_states() is False


def test_capacity_constants():
    assert settings.MAX_QUBITS == 12
    assert settings.MAX_TERMINALS == 8
