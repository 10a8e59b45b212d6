import json
import os
import pathlib
import subprocess

import pytest

ROOT = pathlib.Path(__file__).resolve().parents[2]


def _exe():
    exe = os.environ.get("WIDOMLAB_EXE")
    if exe:
        return exe
    guess = ROOT / "build" / "widomlab"
    if guess.exists():
        return str(guess)
    pytest.skip("widomlab executable not found; set WIDOMLAB_EXE")


@pytest.fixture(scope="session")
def cli():
    exe = _exe()

    def run(*args, env=None):
        e = dict(os.environ)
        e.pop("WIDOMLAB_CONFIG", None)
        e.update(env or {})
        return subprocess.run([exe, *map(str, args)], capture_output=True, text=True, env=e, timeout=600)

    return run


@pytest.fixture(scope="session")
def schema():
    def load(name):
        return json.loads((ROOT / "schemas" / f"{name}.schema.json").read_text())

    return load


@pytest.fixture(scope="session")
def data():
    return ROOT / "data"
