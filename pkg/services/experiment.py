"""
Experiment Service - Weaken-vs-remove comparison over a corpus

Each trial injects random GCIs into a corpus ontology until it is
inconsistent, repairs the result once by weakening and once by removal
(both steered by the original ontology), and records IIC(weakened, removed).
Trials are independent: their seeds derive from (master seed, ontology
index, trial index), so serial and parallel runs produce the same rows.
"""

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from ontology.syntax import load_ontology
from services.evaluation import iic, inject_inconsistency
from services.refinement import RefinementContext
from services.repair import (
    BadAxiomStrategy, ConsistencyChecker, Method, ReferenceMode, REPAIRED,
    repair_remove, repair_weaken,
)
from services.statistics import TooFewSamplesError, wilcoxon_signed_rank
from config.settings import config
from utils.logger import get_logger

logger = get_logger(__name__)

FAILED = 'failed'

CSV_COLUMNS = [
    'ontology', 'variant', 'trial', 'seed', 'iic', 'steps_weaken', 'steps_remove',
    'outcome', 'mean', 'std', 'wilcoxon_p',
]

CSV_HEADER = (
    "# IIC(weaken, remove) per trial; aggregate rows use repaired trials only\n"
    "# wilcoxon_p: one-sided signed-rank test of median > 0.5, unadjusted\n"
    "# Holm-Bonferroni over m ontologies: sort p ascending, p_adj(i) = max_{j<=i} min(1, (m - j + 1) * p(j))\n"
)


@dataclass
class TrialRecord:
    ontology: str
    variant: str
    trial: int
    seed: int
    iic: object = None
    steps_weaken: int = 0
    steps_remove: int = 0
    outcome: str = REPAIRED
    injected: list = field(default_factory=list)
    error: str = None


@dataclass
class IICReport:
    """Trials of one (ontology, variant) pair and their aggregates"""
    ontology: str
    variant: str
    records: list = field(default_factory=list)

    @property
    def values(self):
        return [float(r.iic) for r in self.records if r.outcome == REPAIRED and r.iic is not None]

    @property
    def failed(self):
        return sum(1 for r in self.records if r.outcome != REPAIRED)

    @property
    def mean(self):
        values = self.values
        return float(np.mean(values)) if values else None

    @property
    def std(self):
        values = self.values
        if not values:
            return None
        return float(np.std(values, ddof=1)) if len(values) > 1 else 0.0

    @property
    def wilcoxon(self):
        try:
            return wilcoxon_signed_rank(self.values, 0.5)
        except TooFewSamplesError as e:
            logger.warning(f"No Wilcoxon test for {self.ontology}/{self.variant}: {e}")
            return None


# ==================== TRIALS ====================

def trial_seed(master_seed, ontology_index, trial):
    """64-bit seed of one trial, independent of execution order"""
    sequence = np.random.SeedSequence([master_seed, ontology_index, trial])
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def run_trial(task):
    """
    Run one trial

    Args:
        task: (name, ontology_index, ontology, trial, variant, RepairConfig, InjectionConfig)

    Returns:
        TrialRecord; errors are recorded, not raised
    """
    name, ontology_index, ontology, trial, variant, cfg, inj = task
    seed = trial_seed(cfg.seed, ontology_index, trial)
    record = TrialRecord(name, variant.value, trial, seed)

    try:
        checker = ConsistencyChecker()
        rng = np.random.default_rng(seed)
        inconsistent, record.injected = inject_inconsistency(ontology, inj, rng, checker)

        trial_cfg = replace(
            cfg, bad_axiom=variant, seed=seed,
            reference=ReferenceMode.EXPLICIT, reference_ontology=ontology,
        )
        weakened, weaken_trace = repair_weaken(
            inconsistent, replace(trial_cfg, method=Method.WEAKEN),
            context=RefinementContext(ontology), checker=checker,
        )
        removed, remove_trace = repair_remove(inconsistent, replace(trial_cfg, method=Method.REMOVE), checker=checker)

        record.steps_weaken = len(weaken_trace)
        record.steps_remove = len(remove_trace)
        record.outcome = weaken_trace.outcome
        record.iic = iic(weakened, removed)
    except Exception as e:
        logger.warning(f"Trial {trial} on {name} ({variant.value}) failed: {e}")
        record.outcome = FAILED
        record.error = str(e)

    return record


def run_experiment(corpus, trials, cfg, inj, variants=None, workers=None):
    """
    Weaken-vs-remove experiment

    Args:
        corpus: List of (name, consistent Ontology)
        trials: Trials per ontology and variant
        cfg: RepairConfig; its seed is the master seed
        inj: InjectionConfig
        variants: Bad-axiom strategies to run (default: mis and rand)
        workers: Worker processes (default EXPERIMENT_WORKERS; 1 runs serially)

    Returns:
        List of IICReport in (ontology, variant) order
    """
    variants = [BadAxiomStrategy(v) for v in (variants or list(BadAxiomStrategy))]
    workers = workers or config.EXPERIMENT_WORKERS

    tasks = [
        (name, index, ontology, trial, variant, cfg, inj)
        for index, (name, ontology) in enumerate(corpus)
        for variant in variants
        for trial in range(trials)
    ]
    logger.info(f"Running {len(tasks)} trials over {len(corpus)} ontologies with {workers} worker(s)")

    if workers > 1 and tasks:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(run_trial, tasks, chunksize=max(1, trials // workers)))
    else:
        records = [run_trial(task) for task in tasks]

    reports = {}
    for (name, _, _, _, variant, _, _), record in zip(tasks, records):
        key = (name, variant.value)
        reports.setdefault(key, IICReport(name, variant.value)).records.append(record)

    for report in reports.values():
        if report.failed:
            logger.warning(f"{report.ontology}/{report.variant}: {report.failed} of {len(report.records)} trials excluded")
    return list(reports.values())


# ==================== CORPUS & CSV ====================

def load_corpus(directory):
    """Load every *.onto file of a directory, sorted by file name"""
    paths = sorted(Path(directory).glob('*.onto'))
    return [(path.stem, load_ontology(path)) for path in paths]


def _fmt(value):
    if value is None:
        return ''
    return f"{float(value):.{config.IIC_DECIMALS}f}"


def write_report_csv(reports, stream):
    """
    Write per-trial rows followed by one aggregate row per report

    The output depends only on the reports, so reruns with the same seed
    are byte-identical.
    """
    stream.write(CSV_HEADER)
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(CSV_COLUMNS)

    for report in reports:
        for r in report.records:
            writer.writerow([
                r.ontology, r.variant, r.trial, r.seed, _fmt(r.iic),
                r.steps_weaken, r.steps_remove, r.outcome, '', '', '',
            ])
    for report in reports:
        test = report.wilcoxon
        writer.writerow([
            report.ontology, report.variant, 'aggregate', '', '', '', '',
            f"{len(report.values)} repaired, {report.failed} failed",
            _fmt(report.mean), _fmt(report.std), _fmt(test.p_value if test else None),
        ])


def report_csv(reports):
    buffer = io.StringIO()
    write_report_csv(reports, buffer)
    return buffer.getvalue()
