# tests/conftest.py
import json
from pathlib import Path

import pytest
from typer.testing import CliRunner

from jlrectifier.inner_form import InnerForm, JumpConfig
from jlrectifier.tame_galois import SubfieldDescriptor, TameParams, build_ambient

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

EXAMPLE_DOC = {
    "schema_version": "jlrectifier/config/v1",
    "params": {"q": 3, "e": 2, "f": 2, "z_ef": 0},
    "tower": [{"e_rel": 1, "f_rel": 2}],
    "jumps": [2],
    "inner_form": {"m": 2, "d": 2, "h": 1},
}

SPLIT_DOC = {
    "params": {"q": 3, "e": 2, "f": 2, "z_ef": 0},
    "tower": [{"e_rel": 1, "f_rel": 2}],
    "jumps": [1],
    "inner_form": {"m": 4, "d": 1, "h": 0},
}

TOTALLY_RAMIFIED_DOC = {
    "params": {"q": 5, "e": 4, "f": 1, "z_ef": 0},
    "tower": [{"e_rel": 1, "f_rel": 1}, {"e_rel": 2, "f_rel": 1}],
    "jumps": [1, 2],
    "inner_form": {"m": 2, "d": 2, "h": 1},
}

# m odd over a quadratic ramified E: the rectifier is -1 at varpi_E
ODD_M_DOC = {
    "params": {"q": 3, "e": 2, "f": 1, "z_ef": 0},
    "tower": [{"e_rel": 1, "f_rel": 1}],
    "jumps": [1],
    "inner_form": {"m": 1, "d": 2, "h": 1},
}


def jump_config(doc: dict) -> JumpConfig:
    p = doc["params"]
    form = doc["inner_form"]
    return JumpConfig(
        params=TameParams(q=p["q"], e=p["e"], f=p["f"], z_ef_index=p.get("z_ef", 0)),
        tower=tuple(SubfieldDescriptor(level["e_rel"], level["f_rel"]) for level in doc["tower"]),
        jumps=tuple(doc["jumps"]),
        form=InnerForm(form["m"], form["d"], form["h"]),
    )


@pytest.fixture
def quadratic_unramified_model():
    """q=3, e=2, f=2: N = 80, classes (0,40) exceptional, (1,0) and (1,40) sym-unram."""
    return build_ambient(TameParams(q=3, e=2, f=2))


@pytest.fixture
def cubic_ramified_model():
    """q=7, e=3, f=1: one asymmetric pair (0,114) / (0,228)."""
    return build_ambient(TameParams(q=7, e=3, f=1))


@pytest.fixture
def quadratic_unramified_field_model():
    """q=3, e=1, f=2: a single sym-unram class fixing varpi_E."""
    return build_ambient(TameParams(q=3, e=1, f=2))


@pytest.fixture
def quartic_ramified_model():
    """q=5, e=4, f=1: asymmetric pair (0,156) / (0,468) and the exceptional class (0,312)."""
    return build_ambient(TameParams(q=5, e=4, f=1))


@pytest.fixture
def example_config():
    return jump_config(EXAMPLE_DOC)


@pytest.fixture
def split_config():
    return jump_config(SPLIT_DOC)


@pytest.fixture
def totally_ramified_config():
    return jump_config(TOTALLY_RAMIFIED_DOC)


@pytest.fixture
def odd_m_config():
    return jump_config(ODD_M_DOC)


@pytest.fixture
def all_configs(example_config, split_config, totally_ramified_config, odd_m_config):
    return [example_config, split_config, totally_ramified_config, odd_m_config]


@pytest.fixture
def write_doc(tmp_path):
    def _write(doc, name="config.json"):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def all_checks_config():
    """q=7, e=3, f=2 with d=3: two Hasse invariants and every flag enabled."""
    return jump_config(json.loads((CONFIG_DIR / "all_checks.json").read_text(encoding="utf-8")))
