"""Tests for shared configuration module."""

from pathlib import Path

import pytest
from pydantic import ValidationError

from shared.config import LeviflatConfig, get_config, init_config


def test_leviflat_config_defaults():
    """Test that LeviflatConfig has sensible defaults."""
    config = LeviflatConfig()

    assert config.app_name == "leviflat"
    assert config.logs_dir == Path("./logs")
    assert config.log_level == "WARNING"
    assert config.log_to_file is False
    assert config.log_file is None
    assert config.groebner.s_pair_budget == 200_000
    assert config.groebner.term_order == "grevlex"
    assert config.sampling.seed == 0
    assert config.sampling.random_points == 3
    assert config.hermitian.cone_shortcut is True


def test_leviflat_config_custom_values():
    """Test that LeviflatConfig accepts nested overrides."""
    config = LeviflatConfig(
        log_level="DEBUG",
        logs_dir="/custom/logs",
        log_to_file=True,
        groebner={"s_pair_budget": 5, "term_order": "lex"},
        sampling={"seed": 7},
    )

    assert config.log_level == "DEBUG"
    assert config.log_file == Path("/custom/logs") / "leviflat.log"
    assert config.groebner.s_pair_budget == 5
    assert config.groebner.term_order == "lex"
    assert config.sampling.seed == 7
    assert config.sampling.random_points == 3


def test_leviflat_config_rejects_bad_values():
    """Budgets must be positive and orders must be known."""
    with pytest.raises(ValidationError):
        LeviflatConfig(groebner={"s_pair_budget": 0})
    with pytest.raises(ValidationError):
        LeviflatConfig(groebner={"term_order": "deglex"})


def test_leviflat_config_from_environment(monkeypatch):
    """Environment variables use the LEVIFLAT_ prefix and __ for nesting."""
    monkeypatch.setenv("LEVIFLAT_LOG_LEVEL", "INFO")
    monkeypatch.setenv("LEVIFLAT_GROEBNER__S_PAIR_BUDGET", "42")

    config = LeviflatConfig()

    assert config.log_level == "INFO"
    assert config.groebner.s_pair_budget == 42


def test_get_config_singleton():
    """Test that get_config returns the same instance."""
    config1 = get_config()
    config2 = get_config()

    assert config1 is config2


def test_init_config():
    """Test that init_config replaces the global configuration."""
    config = init_config(app_name="Test App", sampling={"seed": 3})

    assert config.app_name == "Test App"
    assert config.sampling.seed == 3
    assert get_config() is config
