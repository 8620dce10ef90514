"""
Substitution Spectrum Pipeline Runner

This script runs the spectral analysis of a q-substitution definition file:
1. Structure: ergodic decomposition, matrices, predicates, aperiodicity
2. Spectral hull and its extreme points
3. Exact Fourier coefficients of the correlation vector
4. Classification of the extremal measures and the full report
5. Empirical pair frequencies against the exact coefficients

Exit codes: 0 success, 1 incomplete hull enumeration, 2 invalid input,
3 any other analysis failure.
"""

import argparse
import logging
import os
import time

from scripts.Oracle.empirical_oracle import frequency_rows
from scripts.Pipeline.analysis_config import DEFAULT_CONFIG_PATH, load_analysis_config
from scripts.Pipeline.report_writer import ReportWriter, lambda_rows, mixing_rows
from scripts.Pipeline.spectrum_analysis import SpectrumAnalysis
from scripts.Spectrum.fourier_engine import coefficient_rows
from scripts.Substitution import zd_arith
from scripts.Substitution.substitution_errors import CellBudgetExceeded, SubstitutionInputError
from scripts.Substitution.substitution_parser import parse_spec

logger = logging.getLogger("Pipeline")

EXIT_OK = 0
EXIT_INCOMPLETE = 1
EXIT_INVALID_INPUT = 2
EXIT_FAILURE = 3


def setup_logging():
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler("spectrum_pipeline.log"),
            logging.StreamHandler()
        ]
    )


def create_directory_structure(output_dir):
    """Create directory structure for the reports"""
    logger.info("Creating directory structure")
    os.makedirs(output_dir, exist_ok=True)
    logger.info("Directory structure created")


def parse_point(text):
    """'5' -> (5,), '1,0' -> (1, 0)"""
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"lattice point must be integers separated by commas, got '{text}'")


def parse_weights(text):
    if text is None or text == "uniform":
        return text
    return [x.strip() for x in text.split(",")]


def run_analyze(analysis, writer, args):
    logger.info("Running structure analysis")
    document = analysis.structure_document()
    writer.save_document(document, args.output, prefix="analyze")
    return EXIT_OK


def run_hull(analysis, writer, args):
    logger.info("Running spectral hull enumeration")
    document = analysis.hull_document()
    writer.save_document(document, args.output, prefix="hull")
    if not analysis.hull.complete:
        logger.warning("Hull enumeration is incomplete")
        return EXIT_INCOMPLETE
    return EXIT_OK


def run_fourier(analysis, writer, args):
    logger.info("Running Fourier coefficient computation")
    engine = analysis.engine
    if args.k:
        coefficients = {zd_arith.as_point(k, engine.substitution.d): engine.coefficient(k) for k in args.k}
    else:
        window = args.window if args.window is not None else analysis.config.window_power
        coefficients = engine.window_coefficients(window)
    writer.save_document(analysis.coefficient_document(coefficients), args.output, prefix="fourier")
    writer.save_csv(coefficient_rows(engine, coefficients), args.emit_csv, prefix="fourier")
    return EXIT_OK


def run_classify(analysis, writer, args):
    logger.info("Running classification of the extremal measures")
    report = analysis.report(args.window)
    document = {"substitution": analysis.substitution_summary(), "report": report.to_dict()}
    writer.save_document(document, args.output, prefix="classify")
    writer.save_csv(lambda_rows(report), args.emit_csv, prefix="lambda")
    return EXIT_OK if report.complete else EXIT_INCOMPLETE


def run_freq(analysis, writer, args):
    logger.info("Running empirical pair frequencies")
    S = analysis.original
    k = zd_arith.as_point(args.k[0] if args.k else (1,) + (0,) * (S.d - 1), S.d)
    letter = args.letter or S.alphabet.name(0)
    comparisons = analysis.frequencies(letter, args.n or [8], k)
    document = {"substitution": analysis.substitution_summary(), "letter": letter,
                "comparisons": [c.to_dict() for c in comparisons]}
    writer.save_document(document, args.output, prefix="freq")
    writer.save_csv(frequency_rows(S, comparisons), args.emit_csv, prefix="freq")
    return EXIT_OK


def run_report(analysis, writer, args):
    """Run the full pipeline and write document, text report and CSVs"""
    logger.info("Starting full spectrum pipeline")
    start_time = time.time()

    report = analysis.report(args.window)
    document = {
        "substitution": analysis.substitution_summary(),
        "structure": analysis.structure_document(),
        "hull": analysis.hull_document()["hull"],
        "report": report.to_dict(),
    }
    path = writer.save_document(document, args.output, prefix="report")
    writer.save_text(report.render(), os.path.splitext(path)[0] + ".txt")

    window = analysis.engine.window_coefficients(args.window if args.window is not None
                                                 else analysis.config.window_power)
    writer.save_csv(coefficient_rows(analysis.engine, window), args.emit_csv, prefix="coefficients")
    writer.save_csv(lambda_rows(report), os.path.splitext(path)[0] + "_lambda.csv")
    writer.save_csv(mixing_rows(report), os.path.splitext(path)[0] + "_mixing.csv")

    elapsed_time = time.time() - start_time
    logger.info(f"Full pipeline completed in {elapsed_time:.2f} seconds")
    return EXIT_OK if report.complete else EXIT_INCOMPLETE


COMMANDS = {
    "analyze": run_analyze,
    "hull": run_hull,
    "fourier": run_fourier,
    "classify": run_classify,
    "freq": run_freq,
    "report": run_report,
}


def build_parser():
    parser = argparse.ArgumentParser(description="Run the spectral analysis of a q-substitution")
    parser.add_argument("command", choices=sorted(COMMANDS), help="Pipeline step to run")
    parser.add_argument("spec", help="Substitution definition file (JSON)")
    parser.add_argument("--config", default=DEFAULT_CONFIG_PATH, help="Analysis defaults file")
    parser.add_argument("--window", type=int, help="Window power: all k with power_of(k) <= P")
    parser.add_argument("--p-max", type=int, help="Largest exponent for the corner systems")
    parser.add_argument("--method", default="auto",
                        choices=["auto", "exact-1d", "commutative-exact", "numeric", "candidates"],
                        help="Extreme point method")
    parser.add_argument("--weights", help="Class weights c1,c2,... or 'uniform'")
    parser.add_argument("--jobs", type=int, help="Worker threads")
    parser.add_argument("--height-bound", type=int, help="Largest lattice period tried by the classifier")
    parser.add_argument("--k", type=parse_point, action="append", help="Lattice point, e.g. 5 or 1,0")
    parser.add_argument("--n", type=int, action="append", help="Expansion depth for freq (repeatable)")
    parser.add_argument("--letter", help="Starting letter for freq")
    parser.add_argument("--emit-csv", help="CSV output path")
    parser.add_argument("-o", "--output", help="Document output path")
    return parser


def main(argv=None):
    """Main function"""
    args = build_parser().parse_args(argv)
    setup_logging()

    try:
        spec = parse_spec(args.spec)
        config = load_analysis_config(args.config, spec.analysis, {
            "p_max": args.p_max,
            "jobs": args.jobs,
            "height_bound": args.height_bound,
            "window_power": args.window,
        })
        create_directory_structure(config.output_dir)
        writer = ReportWriter(config.output_dir)
        analysis = SpectrumAnalysis(spec, config, method=args.method, weights=parse_weights(args.weights))
        return COMMANDS[args.command](analysis, writer, args)

    except (SubstitutionInputError, CellBudgetExceeded) as e:
        logger.error(f"Invalid input: {str(e)}")
        for line in getattr(e, "diagnostics", None) or []:
            logger.error(f"  {line}")
        return EXIT_INVALID_INPUT
    except Exception as e:
        logger.error(f"Error running pipeline: {str(e)}")
        return EXIT_FAILURE


if __name__ == "__main__":
    exit(main())
