from __future__ import annotations

import pytest

from dqeval.datamodel import ColumnSpec, Dataset
from dqeval.harness import write_demo_root


def make_dataset(**overrides):
    """Small mixed-type table used across the evaluator tests."""
    columns = (
        ColumnSpec("id", vtype="identifier"),
        ColumnSpec("age", vtype="numerical"),
        ColumnSpec("sex", vtype="categorical"),
        ColumnSpec("label", vtype="categorical", role="target"),
        ColumnSpec("stamp", vtype="datetime", role="timestamp"),
    )
    cells = {
        "id": ("1", "2", "3", "4", "5", "6"),
        "age": (30.0, 40.0, None, 50.0, 60.0, 70.0),
        "sex": ("m", "f", "m", "f", "m", "m"),
        "label": ("a", "a", "b", "a", "b", "a"),
        "stamp": (100.0, 200.0, 300.0, 400.0, 500.0, 600.0),
    }
    kwargs = {"columns": columns, "cells": cells, "dataset_id": "mixed"}
    kwargs.update(overrides)
    return Dataset(**kwargs)


@pytest.fixture
def mixed_dataset():
    return make_dataset()


@pytest.fixture(scope="session")
def demo_root(tmp_path_factory):
    """Synthetic PTB-XL-shaped root shared by harness and CLI tests."""
    root = tmp_path_factory.mktemp("demo") / "root"
    write_demo_root(str(root), n_records=300, seed=7)
    return str(root)
