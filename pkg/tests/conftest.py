"""
Shared fixtures: the two running-example TBoxes, their refinement
contexts and the bundled corpus
"""

import logging
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from ontology.models import AtomicName, Exists, Subsumption, Ontology
from services.refinement import RefinementContext

settings.register_profile(
    'repo',
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much, HealthCheck.data_too_large],
)
settings.load_profile('repo')

A, B, C = AtomicName('A'), AtomicName('B'), AtomicName('C')

CORPUS_DIR = Path(__file__).resolve().parent.parent / 'corpus'


@pytest.fixture(autouse=True)
def _restore_root_handlers():
    """The CLI reconfigures the root logger; put pytest's handlers back afterwards"""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def subsumption_tbox():
    """T = {A ⊑ B}"""
    return Ontology.of(Subsumption(A, B))


@pytest.fixture
def cyclic_tbox():
    """T = {A ⊑ ∃r.A}"""
    return Ontology.of(Subsumption(A, Exists('r', A)))


@pytest.fixture
def subsumption_ctx(subsumption_tbox):
    return RefinementContext(subsumption_tbox)


@pytest.fixture
def cyclic_ctx(cyclic_tbox):
    return RefinementContext(cyclic_tbox)


@pytest.fixture
def corpus_dir():
    return CORPUS_DIR


@pytest.fixture
def write_onto(tmp_path):
    """Write ontology text to a file under tmp_path and return its path"""
    def write(text, name='input.onto'):
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return path
    return write
