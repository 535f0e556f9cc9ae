from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from genfixtures import make_project  # noqa: E402

from commentlens.corpus import ProjectRef, ingest  # noqa: E402


@pytest.fixture(scope="session")
def java_project(tmp_path_factory) -> Path:
    return make_project(tmp_path_factory.mktemp("javaproj"), "java",
                        n_files=8, seed=11)


@pytest.fixture(scope="session")
def python_project(tmp_path_factory) -> Path:
    return make_project(tmp_path_factory.mktemp("pyproj"), "python",
                        n_files=8, seed=23)


@pytest.fixture(scope="session")
def demo_store(tmp_path_factory, java_project, python_project):
    store_root = tmp_path_factory.mktemp("store")
    refs = [
        ProjectRef(name="javaproj", origin=str(java_project),
                   language="java"),
        ProjectRef(name="pyproj", origin=str(python_project),
                   language="python"),
    ]
    return ingest(refs, store_root)
