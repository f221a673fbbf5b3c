import logging

import pytest

from config.settings import Config, config
from utils.logger import log_repair_step, setup_logging
from utils.validators import is_identifier, is_fresh_name, validate_name


# ==================== CONFIGURATION ====================

def test_default_configuration_is_valid():
    assert config.validate()


@pytest.mark.parametrize('attribute, value', [
    ('REASONER_NODE_BUDGET', 0),
    ('STEP_LIMIT_FACTOR', 0),
    ('EXPERIMENT_WORKERS', 0),
    ('LOG_LEVEL', 'LOUD'),
    ('CONSTRUCTOR_WEIGHTS', {'atomic': 0.5, 'not': 0.1}),
])
def test_invalid_configuration(attribute, value):
    settings = Config()
    setattr(settings, attribute, value)
    with pytest.raises(ValueError, match=attribute):
        settings.validate()


# ==================== LOGGING ====================

def test_repair_steps_are_logged(caplog):
    with caplog.at_level(logging.INFO, logger='repairs'):
        log_repair_step(7, 0, 'weaken', 'SubClassOf(A B)', 'SubClassOf(A Top)', 3)
        log_repair_step(7, 1, 'remove', 'ClassAssertion(A x)')

    messages = [r.getMessage() for r in caplog.records if r.name == 'repairs']
    assert messages == [
        "Seed: 7 | Step: 0 | Action: weaken | Bad: SubClassOf(A B) | Replacement: SubClassOf(A Top) | Candidates: 3",
        "Seed: 7 | Step: 1 | Action: remove | Bad: ClassAssertion(A x)",
    ]


def test_log_files(tmp_path, monkeypatch):
    monkeypatch.setattr(config, 'LOG_TO_FILE', True)
    monkeypatch.setattr(config, 'LOG_FILE_PATH', str(tmp_path))
    setup_logging(quiet=True)
    log_repair_step(1, 0, 'remove', 'SubClassOf(A B)')
    logging.getLogger('services.repair').warning("step limit reached")
    for handler in logging.getLogger().handlers + logging.getLogger('repairs').handlers:
        handler.flush()

    assert 'Action: remove' in (tmp_path / 'repairs.log').read_text()
    assert 'step limit reached' in (tmp_path / 'errors.log').read_text()
    assert (tmp_path / 'system.log').exists()

    for logger in (logging.getLogger(), logging.getLogger('repairs')):
        for handler in logger.handlers[:]:
            if str(tmp_path) in getattr(handler, 'baseFilename', ''):
                handler.close()
                logger.removeHandler(handler)


# ==================== VALIDATORS ====================

@pytest.mark.parametrize('text, valid', [
    ('Animal', True),
    ('_x1', True),
    ('1x', False),
    ('has-part', False),
    ('', False),
])
def test_identifiers(text, valid):
    assert is_identifier(text) is valid


def test_reserved_names():
    assert is_fresh_name(config.FRESH_INDIVIDUAL_PREFIX + '3')
    assert 'reserved word' in validate_name('Some')
    assert 'reserved prefix' in validate_name(config.FRESH_INDIVIDUAL_PREFIX + '0', 'individual')
    assert validate_name('Dog') is None
