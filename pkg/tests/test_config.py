import importlib
import os

import pytest

import config


@pytest.fixture
def reload_config(monkeypatch):
    yield lambda: importlib.reload(config).Config
    monkeypatch.undo()
    importlib.reload(config)


def test_render_threads_default_to_cpu_count(monkeypatch, reload_config):
    monkeypatch.delenv("RENDER_THREADS", raising=False)
    monkeypatch.setattr(os, "cpu_count", lambda: 6)
    assert reload_config().RENDER_THREADS == 6


def test_render_threads_from_environment(monkeypatch, reload_config):
    monkeypatch.setenv("RENDER_THREADS", "3")
    assert reload_config().RENDER_THREADS == 3


def test_invalid_settings_rejected(monkeypatch, reload_config):
    monkeypatch.setenv("ECHO_CACHE_FRAMES", "0")
    with pytest.raises(ValueError, match="Echo cache"):
        reload_config()
