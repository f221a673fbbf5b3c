"""
Command Line Interface - check, classify, refine, weaken, repair, iic, experiment

Results go to standard output in canonical text form; diagnostics and the
effective seed go to the diagnostic stream. Exit codes: 0 success or
consistent, 1 inconsistent (check), 2 usage or input error, 3 runtime error.
"""

import argparse
import sys
from pathlib import Path

import numpy as np

from ontology.models import OntologyRepairError, sort_key, render_concept
from ontology.syntax import (
    OntologySyntaxError, load_ontology, parse_axiom, parse_concept, serialize_ontology,
)
from reasoner.session import ReasonerSession
from services.refinement import RefinementContext, refine_iter, UP, DOWN
from services.repair import (
    RepairConfig, ReferenceMode, BadAxiomStrategy, Method, repair, weakenings,
)
from services.evaluation import InjectionConfig, iic_breakdown
from services.experiment import load_corpus, run_experiment, write_report_csv
from config.settings import config
from utils.logger import setup_logging, get_logger

logger = get_logger(__name__)


class UsageError(Exception):
    """Invalid command-line input detected after argument parsing"""


# ==================== ARGUMENT TYPES ====================

def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _non_negative_int(text):
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def _mis_samples(text):
    return text if text == 'auto' else _positive_int(text)


def _seed(text):
    value = int(text)
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must be a 64-bit unsigned integer, got {text}")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--quiet', action='store_true', help='only report errors on the diagnostic stream')

    parser = argparse.ArgumentParser(prog='ontorepair', description='ALC ontology repair by axiom weakening')
    sub = parser.add_subparsers(dest='command', required=True)

    check = sub.add_parser('check', parents=[common], help='decide consistency')
    check.add_argument('file')

    classify = sub.add_parser('classify', parents=[common], help='print the inferred class hierarchy')
    classify.add_argument('file')

    refine = sub.add_parser('refine', parents=[common], help='generalise or specialise a concept')
    refine.add_argument('--ontology', required=True)
    refine.add_argument('--mode', choices=[UP, DOWN], required=True)
    refine.add_argument('--concept', required=True)
    refine.add_argument('--depth', type=_non_negative_int, default=config.REFINE_DEPTH)
    refine.add_argument('--size-cap', type=_positive_int, default=config.REFINE_SIZE_CAP)
    refine.add_argument('--strict', action='store_true', help='drop results equivalent to the input')

    weaken = sub.add_parser('weaken', parents=[common], help='print the weakenings of an axiom')
    weaken.add_argument('--ontology', required=True, help='reference ontology')
    weaken.add_argument('--axiom', required=True)

    rep = sub.add_parser('repair', parents=[common], help='repair an inconsistent ontology')
    rep.add_argument('file')
    rep.add_argument('--method', choices=[m.value for m in Method], default=Method.WEAKEN.value)
    rep.add_argument('--bad-axiom', choices=[b.value for b in BadAxiomStrategy], default=BadAxiomStrategy.MIS.value)
    rep.add_argument('--mis-samples', type=_mis_samples, default='auto')
    rep.add_argument('--reference', default=ReferenceMode.BRAVE.value, help='brave, cautious or a reference file')
    rep.add_argument('--seed', type=_seed)
    rep.add_argument('--max-steps', type=_positive_int)
    rep.add_argument('--trace', help='write the repair trace as JSON')
    rep.add_argument('--out', help='write the repaired ontology here instead of standard output')

    compare = sub.add_parser('iic', parents=[common], help='inferable information content of FILE1 w.r.t. FILE2')
    compare.add_argument('file1')
    compare.add_argument('file2')

    exp = sub.add_parser('experiment', parents=[common], help='weaken-vs-remove experiment over a corpus')
    exp.add_argument('--corpus', required=True)
    exp.add_argument('--trials', type=_non_negative_int, default=50)
    exp.add_argument('--seed', type=_seed)
    exp.add_argument('--bad-axiom', choices=[b.value for b in BadAxiomStrategy], action='append',
                     help='variant to run (repeatable; default: all)')
    exp.add_argument('--workers', type=_positive_int, default=config.EXPERIMENT_WORKERS)
    exp.add_argument('--out', help='CSV report path (default: standard output)')

    return parser


# ==================== HELPERS ====================

def _load(path):
    if not Path(path).is_file():
        raise FileNotFoundError(f"no such file: {path}")
    return load_ontology(path)


def _effective_seed(args):
    seed = args.seed
    if seed is None:
        seed = int(np.random.SeedSequence().entropy) % (2 ** 64)
    if not args.quiet:
        print(f"seed: {seed}", file=sys.stderr)
    return seed


def _emit(text, path=None):
    if path:
        Path(path).write_text(text, encoding='utf-8')
    else:
        sys.stdout.write(text)


# ==================== COMMANDS ====================

def cmd_check(args):
    o = _load(args.file)
    consistent = ReasonerSession(o).is_consistent()
    print('consistent' if consistent else 'inconsistent')
    return config.EXIT_OK if consistent else config.EXIT_INCONSISTENT


def cmd_classify(args):
    o = _load(args.file)
    session = ReasonerSession(o)
    if not session.is_consistent():
        print('inconsistent')
        return config.EXIT_INCONSISTENT
    logger.info(f"EL fragment: {'yes' if o.is_el() else 'no'}")
    for a, b in sorted(session.classify(o.concept_names)):
        if a != b:
            print(f"SubClassOf({a} {b})")
    return config.EXIT_OK


def cmd_refine(args):
    o = _load(args.ontology)
    concept = parse_concept(args.concept)
    ctx = RefinementContext(o)
    result = refine_iter(ctx, concept, args.mode, args.depth, args.size_cap)
    if args.strict:
        result = [x for x in result if not ctx.session.equivalent(x, concept)]
    for x in sorted(result, key=sort_key):
        print(render_concept(x))
    return config.EXIT_OK


def cmd_weaken(args):
    ctx = RefinementContext(_load(args.ontology))
    for ax in sorted(weakenings(ctx, parse_axiom(args.axiom)), key=sort_key):
        print(ax.to_text())
    return config.EXIT_OK


def cmd_repair(args):
    o = _load(args.file)
    seed = _effective_seed(args)

    reference_ontology = None
    if args.reference in (ReferenceMode.BRAVE.value, ReferenceMode.CAUTIOUS.value):
        reference = ReferenceMode(args.reference)
    else:
        reference = ReferenceMode.EXPLICIT
        reference_ontology = _load(args.reference)

    try:
        cfg = RepairConfig(
            method=args.method, bad_axiom=args.bad_axiom, mis_samples=args.mis_samples,
            reference=reference, reference_ontology=reference_ontology, seed=seed,
            max_steps=args.max_steps,
        )
    except ValueError as e:
        raise UsageError(str(e)) from None

    repaired, trace = repair(o, cfg)
    logger.info(f"{len(trace)} steps, outcome {trace.outcome}")
    if args.trace:
        Path(args.trace).write_text(trace.to_json() + "\n", encoding='utf-8')
    _emit(serialize_ontology(repaired), args.out)
    return config.EXIT_OK


def cmd_iic(args):
    breakdown = iic_breakdown(_load(args.file1), _load(args.file2))
    print(f"iic: {float(breakdown.value):.{config.IIC_DECIMALS}f} ({breakdown.value})")
    print(f"only_first: {len(breakdown.only_first)}")
    print(f"only_second: {len(breakdown.only_second)}")
    return config.EXIT_OK


def cmd_experiment(args):
    if not Path(args.corpus).is_dir():
        raise FileNotFoundError(f"no such directory: {args.corpus}")
    corpus = load_corpus(args.corpus)
    if not corpus:
        raise UsageError(f"no .onto files in {args.corpus}")
    seed = _effective_seed(args)

    cfg = RepairConfig(seed=seed)
    reports = run_experiment(corpus, args.trials, cfg, InjectionConfig(seed=seed),
                             variants=args.bad_axiom, workers=args.workers)

    if args.out:
        with open(args.out, 'w', encoding='utf-8', newline='') as stream:
            write_report_csv(reports, stream)
    else:
        write_report_csv(reports, sys.stdout)
    return config.EXIT_OK


COMMANDS = {
    'check': cmd_check,
    'classify': cmd_classify,
    'refine': cmd_refine,
    'weaken': cmd_weaken,
    'repair': cmd_repair,
    'iic': cmd_iic,
    'experiment': cmd_experiment,
}


# ==================== DISPATCH ====================

def dispatch(argv):
    """
    Parse argv, run the command and map failures to exit codes

    Args:
        argv: Arguments without the program name

    Returns:
        Exit code
    """
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return config.EXIT_OK if e.code == 0 else config.EXIT_USAGE

    setup_logging(quiet=args.quiet)

    try:
        config.validate()
    except ValueError as e:
        logger.error(f"configuration: {e}")
        return config.EXIT_USAGE

    try:
        return COMMANDS[args.command](args)
    except (FileNotFoundError, IsADirectoryError, OntologySyntaxError, UsageError) as e:
        logger.error(f"{args.command}: {e}")
        return config.EXIT_USAGE
    except (OntologyRepairError, ValueError, MemoryError, OSError) as e:
        logger.error(f"{args.command}: {type(e).__name__}: {e}")
        return config.EXIT_RUNTIME
