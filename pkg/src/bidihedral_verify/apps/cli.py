"""Command-line front end: construct families, analyse graphs and run manifests."""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from colorama import init

from bidihedral_verify import __version__
from bidihedral_verify.services.verifier import run_manifest, write_report
from bidihedral_verify.utils.actions import coset_action, is_biregular, natural_action
from bidihedral_verify.utils.config import default_jobs
from bidihedral_verify.utils.errors import CapacityError, ManifestError, VerificationError
from bidihedral_verify.utils.graph_analysis import (
    automorphism_group,
    find_biregular_dihedral,
    is_arc_transitive,
    normal_quotient,
)
from bidihedral_verify.utils.graph_families import build_family, orbital_graphs
from bidihedral_verify.utils.graph_io import GRAPH_FORMATS, format_graph, load_graph, load_group, to_graph6
from bidihedral_verify.utils.logger import log_info, set_verbose
from bidihedral_verify.utils.ui import print_error, print_header, print_success, print_table, print_warning

init(autoreset=True)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def _emit(payload: Dict[str, Any]) -> None:
    print(json.dumps(payload))


def _cycles(group) -> List[str]:
    return [g.to_cycle_string(one_based=True) for g in group.generators]


def cmd_construct(args: argparse.Namespace) -> int:
    built = build_family(args.family)
    text = format_graph(built.graph, args.format)
    if args.out:
        Path(args.out).write_text(text, encoding="ascii")
        print_success(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    graph = built.graph
    print_header(built.provenance)
    print_table(
        ["vertices", "edges", "valency", "group order"],
        [[graph.n, graph.edge_count(), graph.valency(), built.group.order()]],
    )
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    report = run_manifest(args.manifest, jobs=args.jobs, include_timing=not args.no_timing)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            write_report(report, handle)
    else:
        write_report(report, sys.stdout)
    summary = report.summary
    message = f"{summary['pass']} passed, {summary['fail']} failed, {summary['skipped']} skipped"
    if report.exit_code:
        print_error(message)
    else:
        print_success(message)
    return EXIT_FAILED if report.exit_code else EXIT_OK


def cmd_aut(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    group = automorphism_group(graph)
    _emit({"vertices": graph.n, "order": group.order(), "generators": _cycles(group)})
    return EXIT_OK


def cmd_orbitals(args: argparse.Namespace) -> int:
    group = load_group(args.group)
    if args.point_stabilizer:
        action = coset_action(group, load_group(args.point_stabilizer))
    else:
        action = natural_action(group)
    for orbital in orbital_graphs(action):
        facts = orbital.facts
        _emit(
            {
                "suborbit": facts["suborbit"],
                "suborbit_size": facts["suborbit_size"],
                "self_paired": facts["self_paired"],
                "valency": orbital.graph.valency(),
                "connected": facts["connected"],
                "arc_transitive": facts["arc_transitive"],
                "graph6": to_graph6(orbital.graph),
            }
        )
    return EXIT_OK


def cmd_quotient(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    action = natural_action(load_group(args.group))
    result = normal_quotient(graph, action, load_group(args.normal))
    _emit(
        {
            "blocks": len(result.blocks.blocks),
            "r": result.r,
            "cover": result.is_cover,
            "multiplicities": {str(k): v for k, v in result.multiplicity_table.items()},
            "internal_edges": result.internal_edges,
            "quotient": to_graph6(result.quotient),
        }
    )
    return EXIT_OK


def cmd_search_bidihedral(args: argparse.Namespace) -> int:
    graph = load_graph(args.graph)
    action = natural_action(load_group(args.group))
    found = find_biregular_dihedral(graph, action)
    arc_transitive = is_arc_transitive(graph, action)
    for H in found:
        _emit({"order": H.order(), "biregular": is_biregular(action, H), "generators": _cycles(H)})
    _emit({"found": len(found), "arc_transitive": arc_transitive})
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bidihedral-verify",
        description="Permutation groups, bi-dihedrant graph families and their verification manifests.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    construct = sub.add_parser("construct", help="Build a graph family, e.g. g2q:q=5")
    construct.add_argument("family", help="name:key=value,... (see docs for the family list)")
    construct.add_argument("--out", help="Write the graph here instead of stdout")
    construct.add_argument("--format", choices=GRAPH_FORMATS, default="graph6")
    construct.set_defaults(handler=cmd_construct)

    check = sub.add_parser("check", help="Run a check manifest (default: the packaged one)")
    check.add_argument("manifest", nargs="?", default=None)
    check.add_argument("--jobs", type=int, default=None, help="Worker count (default: VERIFY_JOBS or settings)")
    check.add_argument("--out", help="Write the JSON-lines report here instead of stdout")
    check.add_argument("--no-timing", action="store_true", help="Report runtime_ms as 0")
    check.set_defaults(handler=cmd_check)

    aut = sub.add_parser("aut", help="Automorphism group of a graph file")
    aut.add_argument("graph")
    aut.set_defaults(handler=cmd_aut)

    orbitals = sub.add_parser("orbitals", help="Orbital graphs of a group action")
    orbitals.add_argument("group", help="Group file (1-based cycle strings)")
    orbitals.add_argument("--point-stabilizer", help="Group file of K; act on the right cosets of K")
    orbitals.set_defaults(handler=cmd_orbitals)

    quotient = sub.add_parser("quotient", help="Normal quotient of a graph")
    quotient.add_argument("graph")
    quotient.add_argument("group")
    quotient.add_argument("normal")
    quotient.set_defaults(handler=cmd_quotient)

    search = sub.add_parser("search-bidihedral", help="Bi-regular dihedral subgroups of a graph group")
    search.add_argument("graph")
    search.add_argument("group")
    search.set_defaults(handler=cmd_search_bidihedral)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the command line application."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if args.verbose:
        set_verbose(True)
    if getattr(args, "jobs", None) is not None and args.jobs < 1:
        print_error("--jobs must be at least 1")
        return EXIT_USAGE
    log_info(f"command {args.command} (default jobs {default_jobs()})")
    try:
        return args.handler(args)
    except CapacityError as e:
        print_warning(str(e))
        _emit({"status": "skipped(capacity)", "reason": str(e)})
        return EXIT_OK
    except ManifestError as e:
        print_error(str(e))
        return EXIT_USAGE
    except (VerificationError, OSError) as e:
        print_error(str(e))
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
