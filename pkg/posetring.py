#!/usr/bin/env python3
"""
posetring command line
Validate simplicial posets, report local cohomology, classify face rings
and run the cross-checking oracles
"""

import json
import logging
import sys
from typing import List, Optional

# Import configuration
try:
    import config
except ImportError:
    config = None

# Configure logging
log_level = getattr(logging, getattr(config, "LOG_LEVEL", "INFO"))
log_format = getattr(config, "LOG_FORMAT", '%(asctime)s - %(levelname)s - %(message)s')

if config and getattr(config, "LOG_FILE", None):
    logging.basicConfig(
        level=log_level,
        format=log_format,
        handlers=[
            logging.FileHandler(config.LOG_FILE),
            logging.StreamHandler()
        ]
    )
else:
    logging.basicConfig(level=log_level, format=log_format)

logger = logging.getLogger(__name__)

from cohomology_classify import ClassificationError, classify, local_cohomology_table, reduced_cohomology_X
from corpus import CorpusError, corpus_file, list_members, random_simplicial_poset, read_poset_source
from face_ring import RingError, f_vector, h_vector
from incidence_cells import verify_incidence
from linalg_exact import Field, LinalgError
from oracles import run_oracles
from poset_core import PosetError, is_boolean, is_meet_semilattice
from sq_modules import SqModuleError

DEFAULT_FIELD = getattr(config, "DEFAULT_FIELD", "rational")

EXIT_OK = 0
EXIT_PROPERTY_VIOLATED = 1
EXIT_INVALID_INPUT = 2


class UsageError(Exception):
    """Bad command-line arguments"""


def emit(payload) -> None:
    print(json.dumps(payload, indent=2))


def _option(args: List[str], name: str, default: Optional[str] = None) -> Optional[str]:
    if name in args:
        k = args.index(name)
        if k + 1 >= len(args):
            raise UsageError(f"{name} needs a value")
        return args[k + 1]
    return default


def _positional(args: List[str]) -> List[str]:
    result = []
    skip = False
    for a in args:
        if skip:
            skip = False
        elif a.startswith("--"):
            skip = True
        else:
            result.append(a)
    return result


# ============================================================================
# COMMANDS
# ============================================================================

def cmd_validate(source: str) -> int:
    P, data = read_poset_source(source)
    incidence = verify_incidence(P)
    emit({
        "name": data.get("name"),
        "valid": True,
        "elements": P.size,
        "atoms": P.n,
        "d": P.d,
        "boolean": is_boolean(P),
        "simplicial_complex": is_meet_semilattice(P),
        "diamonds_checked": incidence.diamonds_checked,
        "incidence_ok": incidence.ok,
    })
    return EXIT_OK if incidence.ok else EXIT_PROPERTY_VIOLATED


def cmd_report(source: str, field: Field) -> int:
    P, data = read_poset_source(source)
    table = local_cohomology_table(P, field)
    emit({
        "name": data.get("name"),
        "field": field.descriptor,
        "d": P.d,
        "f_vector": list(f_vector(P)),
        "h_vector": list(h_vector(P)),
        "reduced_cohomology_X": list(reduced_cohomology_X(P, field)),
        "local_cohomology": [
            {"element": P.labels[x], "degree": i, "dim": v}
            for (x, i), v in sorted(table.entries.items())
        ],
        "classification": classify(P, field).to_dict(),
    })
    return EXIT_OK


def cmd_classify(source: str, field: Field) -> int:
    P, data = read_poset_source(source)
    report = classify(P, field).to_dict()
    report["name"] = data.get("name")
    emit(report)
    return EXIT_OK


def cmd_oracle(source: str, field: Field, seed: Optional[int]) -> int:
    P, data = read_poset_source(source)
    report = run_oracles(P, field, seed, facet_input="facets" in data)
    emit({
        "name": data.get("name"),
        "field": report.field,
        "seed": report.seed,
        "checks": report.checks,
        "passed": report.passed,
    })
    if not report.passed:
        print(f"Oracle failures with seed {report.seed}: {', '.join(report.failures())}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_PROPERTY_VIOLATED


def cmd_corpus(args: List[str]) -> int:
    if not args or args[0] not in ("list", "emit"):
        raise UsageError("corpus needs 'list' or 'emit <name>'")
    if args[0] == "list":
        emit(list_members())
        return EXIT_OK
    if len(args) < 2:
        raise UsageError("corpus emit needs a member name")
    emit(corpus_file(args[1]))
    return EXIT_OK


def cmd_random(seed_text: str) -> int:
    try:
        seed = int(seed_text)
    except ValueError:
        raise UsageError(f"Seed must be an integer, got '{seed_text}'")
    emit(random_simplicial_poset(seed))
    return EXIT_OK


def poset_diagnostic(e: PosetError) -> dict:
    """Axiom rejection as a JSON record with the offending element and its witness"""
    return {
        "error": type(e).__name__,
        "message": str(e),
        "element": e.element,
        "witness": e.witness,
    }


def print_usage():
    print("Usage: python posetring.py <command> [options]")
    print("\nCommands:")
    print("  validate <file>                        - Check the simplicial poset axioms")
    print("  report <file> [--field F]              - f/h-vectors, cohomology of X, K_x table")
    print("  classify <file> [--field F]            - Depth, CM, Buchsbaum, Gorenstein*, Serre")
    print("  oracle <file> [--field F] [--seed N]   - Run all cross-checks")
    print("  corpus list | corpus emit <name>       - Built-in example posets")
    print("  random <seed>                          - Random simplicial poset file")
    print("\n<file> may be corpus:<name>; F is rational or gf:<p>")
    print("\nExamples:")
    print("  python posetring.py classify corpus:digon")
    print("  python posetring.py classify corpus:rp2_six_vertex --field gf:2")
    print("  python posetring.py corpus emit 'glued_simplices(3)' > glued.json")


def run(argv: List[str]) -> int:
    if not argv:
        print_usage()
        return EXIT_INVALID_INPUT

    command, args = argv[0], argv[1:]
    try:
        positional = _positional(args)
        if command == "corpus":
            return cmd_corpus(args)
        if command == "random":
            if not positional:
                raise UsageError("random needs a seed")
            return cmd_random(positional[0])
        if command not in ("validate", "report", "classify", "oracle"):
            raise UsageError(f"Unknown command: {command}")
        if not positional:
            raise UsageError(f"{command} needs a poset file")
        source = positional[0]
        if command == "validate":
            return cmd_validate(source)
        field = Field.parse(_option(args, "--field", DEFAULT_FIELD))
        if command == "report":
            return cmd_report(source, field)
        if command == "classify":
            return cmd_classify(source, field)
        seed_text = _option(args, "--seed")
        try:
            seed = int(seed_text) if seed_text is not None else None
        except ValueError:
            raise UsageError(f"Seed must be an integer, got '{seed_text}'")
        return cmd_oracle(source, field, seed)

    except PosetError as e:
        print(f"Error: {e}", file=sys.stderr)
        print(json.dumps(poset_diagnostic(e), default=str), file=sys.stderr)
        return EXIT_INVALID_INPUT
    except (UsageError, CorpusError, LinalgError) as e:
        print(f"Error: {e}", file=sys.stderr)
        if isinstance(e, UsageError):
            print_usage()
        return EXIT_INVALID_INPUT
    except (ClassificationError, SqModuleError, RingError) as e:
        logger.error(f"Consistency check failed: {e}")
        return EXIT_PROPERTY_VIOLATED
    except Exception as e:
        logger.error(f"Unexpected error: {e}", exc_info=True)
        return EXIT_PROPERTY_VIOLATED


def main():
    """Main entry point"""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    try:
        main()
    except KeyboardInterrupt:
        print("\n⚠️  Interrupted by user", file=sys.stderr)
        sys.exit(1)
