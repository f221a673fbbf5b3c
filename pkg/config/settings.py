"""
Settings Module - Centralized configuration management
All tunables of the reasoner, refinement, repair and experiment layers
"""

import os
from dotenv import load_dotenv

load_dotenv()


def _env_bool(name, default):
    return os.getenv(name, str(default)).lower() == 'true'


class Config:
    """Application configuration"""

    # Logging Configuration
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FILE_PATH = os.getenv('LOG_FILE_PATH', 'logs/')
    LOG_TO_FILE = _env_bool('LOG_TO_FILE', False)
    LOG_RETENTION_DAYS = int(os.getenv('LOG_RETENTION_DAYS', 30))

    # Reasoner Configuration
    REASONER_NODE_BUDGET = int(os.getenv('REASONER_NODE_BUDGET', 1_000_000))
    FRESH_INDIVIDUAL_PREFIX = '__fresh_'

    # Brute-force oracle guards
    ORACLE_SIGNATURE_BOUND = int(os.getenv('ORACLE_SIGNATURE_BOUND', 64))
    ORACLE_MAX_INTERPRETATIONS = int(os.getenv('ORACLE_MAX_INTERPRETATIONS', 4_194_304))

    # Refinement Configuration
    REFINE_SIZE_CAP = int(os.getenv('REFINE_SIZE_CAP', 50))
    REFINE_DEPTH = int(os.getenv('REFINE_DEPTH', 1))

    # Repair Configuration
    CAUTIOUS_SUBSET_CAP = int(os.getenv('CAUTIOUS_SUBSET_CAP', 256))
    STEP_LIMIT_FACTOR = int(os.getenv('STEP_LIMIT_FACTOR', 10))

    # Inconsistency injection
    INJECTION_MAX_ATTEMPTS = int(os.getenv('INJECTION_MAX_ATTEMPTS', 1000))
    INJECTION_MAX_DEPTH = int(os.getenv('INJECTION_MAX_DEPTH', 3))

    # Experiment harness
    EXPERIMENT_WORKERS = int(os.getenv('EXPERIMENT_WORKERS', 1))
    WILCOXON_EXACT_MAX_N = 12
    IIC_DECIMALS = 6

    # Random concept sampler: constructor -> probability
    CONSTRUCTOR_WEIGHTS = {
        'atomic': 0.4,
        'not': 0.15,
        'and': 0.15,
        'or': 0.15,
        'some': 0.1,
        'all': 0.05,
    }

    # CLI exit codes
    EXIT_OK = 0
    EXIT_INCONSISTENT = 1
    EXIT_USAGE = 2
    EXIT_RUNTIME = 3

    def validate(self):
        """Validate critical configuration settings"""
        errors = []

        if self.REASONER_NODE_BUDGET < 1:
            errors.append(f"REASONER_NODE_BUDGET must be positive: {self.REASONER_NODE_BUDGET}")

        if self.REFINE_SIZE_CAP < 1:
            errors.append(f"REFINE_SIZE_CAP must be positive: {self.REFINE_SIZE_CAP}")

        if self.STEP_LIMIT_FACTOR < 1:
            errors.append(f"STEP_LIMIT_FACTOR must be positive: {self.STEP_LIMIT_FACTOR}")

        if self.INJECTION_MAX_ATTEMPTS < 1:
            errors.append(f"INJECTION_MAX_ATTEMPTS must be positive: {self.INJECTION_MAX_ATTEMPTS}")

        if self.EXPERIMENT_WORKERS < 1:
            errors.append(f"EXPERIMENT_WORKERS must be positive: {self.EXPERIMENT_WORKERS}")

        if abs(sum(self.CONSTRUCTOR_WEIGHTS.values()) - 1.0) > 1e-9:
            errors.append("CONSTRUCTOR_WEIGHTS must sum to 1")

        if self.LOG_LEVEL.upper() not in ['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL']:
            errors.append(f"Invalid LOG_LEVEL: {self.LOG_LEVEL}")

        if errors:
            raise ValueError("Configuration validation failed:\n" + "\n".join(errors))

        return True


config = Config()
