import time

import pytest

from ontology.syntax import parse_ontology
import services.experiment as experiment
from services.evaluation import InjectionConfig
from services.experiment import (
    FAILED, CSV_COLUMNS, IICReport, TrialRecord, trial_seed, run_trial, run_experiment, load_corpus, report_csv,
)
from services.refinement import RefinementContext
from services.repair import BadAxiomStrategy, RepairConfig, REPAIRED

SMALL = parse_ontology("""
    SubClassOf(Dog Mammal)
    SubClassOf(Cat Mammal)
    SubClassOf(Mammal Animal)
    SubClassOf(Dog Not(Cat))
    SubClassOf(Mammal Some(eats Food))
    ClassAssertion(Dog rex)
    ClassAssertion(Cat tom)
    ClassAssertion(Food bone)
    PropertyAssertion(eats rex bone)
""")


def small_run(trials=3, seed=7, workers=1, variants=None):
    return run_experiment(
        [('small', SMALL)], trials, RepairConfig(seed=seed), InjectionConfig(seed=seed),
        variants=variants, workers=workers,
    )


def test_trial_seeds_are_stable_and_distinct():
    assert trial_seed(1, 0, 0) == trial_seed(1, 0, 0)
    seeds = {trial_seed(1, o, t) for o in range(3) for t in range(20)}
    assert len(seeds) == 60
    assert all(0 <= s < 2 ** 64 for s in seeds)


def test_zero_trials_give_an_empty_report():
    assert small_run(trials=0) == []
    assert report_csv([]).splitlines()[-1] == ','.join(CSV_COLUMNS)


def test_report_shape():
    reports = small_run()
    assert [(r.ontology, r.variant) for r in reports] == [('small', 'mis'), ('small', 'rand')]
    for report in reports:
        assert [r.trial for r in report.records] == [0, 1, 2]
        for record in report.records:
            if record.outcome == REPAIRED:
                assert record.injected
                assert 0 <= record.iic <= 1
                assert record.steps_remove >= 1


def test_variant_selection():
    reports = small_run(trials=1, variants=['rand'])
    assert [r.variant for r in reports] == ['rand']


def test_aggregates_are_recomputable():
    report = IICReport('o', 'mis', [
        TrialRecord('o', 'mis', 0, 1, iic=1),
        TrialRecord('o', 'mis', 1, 2, iic=0.5),
        TrialRecord('o', 'mis', 2, 3, iic=0.75),
        TrialRecord('o', 'mis', 3, 4, outcome=FAILED),
    ])
    assert report.values == [1.0, 0.5, 0.75]
    assert report.failed == 1
    assert report.mean == pytest.approx(0.75)
    assert report.std == pytest.approx(0.25)
    # two non-zero differences are too few for the test
    assert report.wilcoxon is None


def test_failed_trials_are_recorded():
    # negation-free atomic axioms can never contradict this ontology
    harmless = parse_ontology("SubClassOf(A B)\nClassAssertion(A x)\n")
    reports = run_experiment(
        [('harmless', harmless)], 2, RepairConfig(seed=1),
        InjectionConfig(max_depth=0, allow_negation=False, max_attempts=1), variants=['mis'],
    )
    records = reports[0].records
    assert all(r.outcome == FAILED and r.error for r in records)
    assert reports[0].values == []
    assert 'aggregate' in report_csv(reports)


def test_csv_is_reproducible():
    assert report_csv(small_run()) == report_csv(small_run())


def test_parallel_and_serial_runs_agree():
    assert report_csv(small_run(workers=2)) == report_csv(small_run(workers=1))


def test_csv_layout():
    lines = report_csv(small_run(trials=2)).splitlines()
    header = [line for line in lines if line.startswith('#')]
    rows = [line for line in lines if not line.startswith('#')]

    assert any('Holm' in line for line in header)
    assert rows[0] == ','.join(CSV_COLUMNS)
    assert len(rows) == 1 + 2 * 2 + 2
    assert all(row.split(',')[2] == 'aggregate' for row in rows[-2:])


def test_each_trial_builds_its_own_reference_context(monkeypatch):
    built = []

    class RecordingContext(RefinementContext):
        def __init__(self, reference, *args, **kwargs):
            super().__init__(reference, *args, **kwargs)
            built.append(self)

    monkeypatch.setattr(experiment, 'RefinementContext', RecordingContext)
    records = small_run(trials=2, variants=['mis'])[0].records

    assert len(built) == sum(1 for r in records if r.injected)
    assert len({id(ctx.session) for ctx in built}) == len(built)


def test_corpus_trial_finishes_in_time(corpus_dir):
    name, ontology = load_corpus(corpus_dir)[0]
    task = (name, 0, ontology, 36, BadAxiomStrategy.MIS, RepairConfig(seed=2024), InjectionConfig(seed=2024))

    started = time.perf_counter()
    record = run_trial(task)
    elapsed = time.perf_counter() - started

    assert record.outcome != FAILED, record.error
    assert elapsed < 60


def test_load_corpus(corpus_dir):
    corpus = load_corpus(corpus_dir)
    assert [name for name, _ in corpus] == ['animals', 'family', 'pizza', 'university', 'vehicles']


@pytest.mark.slow
def test_weakening_keeps_more_information_than_removal(corpus_dir):
    reports = run_experiment(
        load_corpus(corpus_dir), 50, RepairConfig(seed=2024), InjectionConfig(seed=2024),
        variants=['mis'], workers=4,
    )
    assert len(reports) == 5
    for report in reports:
        assert report.mean > 0.5, report.ontology
        assert report.wilcoxon.p_value < 0.05, report.ontology
