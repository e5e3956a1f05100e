import pytest

from cueaudit import load_config


@pytest.fixture(scope="session")
def config():
    return load_config()


@pytest.fixture(scope="session")
def lexicon(config):
    return config.lexicon


@pytest.fixture(scope="session")
def templates(config):
    return config.templates


@pytest.fixture(scope="session")
def transcripts(config):
    return config.transcripts


def write_manifest(tmp_path, body: str):
    """Drop a manifest YAML into tmp_path and return its path."""
    path = tmp_path / "manifest.yaml"
    path.write_text(
        "format: cueaudit-manifest\nversion: 1\n" + body, encoding="utf-8"
    )
    return path


def write_oracle(tmp_path, body: str, name: str = "oracle.yaml"):
    path = tmp_path / name
    path.write_text(
        "format: cueaudit-oracle\nversion: 1\n" + body, encoding="utf-8"
    )
    return path
