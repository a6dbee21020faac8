"""
simpforge verification CLI
Run, list and mutation-test the certificate suites
"""

import argparse
import sys
from pathlib import Path

from modules.checks import FAIL, PASS, SKIPPED, safe_print
from modules.mutations import MUTATIONS
from modules.verify import (
    Bounds,
    ConfigError,
    emit_report,
    exit_code,
    list_checks,
    load_config,
    realization_from_config,
    run_mutations,
    run_suite,
    save_report,
    tensor_w_max_from_config,
    workers_from_config,
)

EXIT_CONFIG_ERROR = 2


def add_bound_flags(parser: argparse.ArgumentParser):
    parser.add_argument('--suite', action='append', dest='suites', metavar='S',
                        help='Suite to run: simplex, salg, models, homotopy, homology, hopf, all (repeatable)')
    parser.add_argument('--p-max', type=int, help='Highest simplicial level checked')
    parser.add_argument('--n-max', type=int, help='Largest tensor factor count')
    parser.add_argument('--mk-max', type=int, help='Bound on m + k for the master homotopies')
    parser.add_argument('--w-max', type=int, help='Largest homology weight')
    parser.add_argument('--d-policy', help="'exhaustive' or 'sample:COUNT:SEED'")
    parser.add_argument('--config', type=str, default=None,
                        help='Path to config file (default: $SIMPFORGE_CONFIG, then config/config.yaml)')
    parser.add_argument('--workers', type=int, help='Threads the checks run in (default: run.workers, then 4)')


def resolve_settings(args, config=None):
    """Defaults < config file < flags."""
    if config is None:
        config = load_config(Path(args.config) if args.config else None)
    bounds = Bounds.from_config(config).with_overrides(
        p_max=args.p_max, n_max=args.n_max, mk_max=args.mk_max,
        w_max=args.w_max, d_policy=args.d_policy,
    )
    return config, bounds, realization_from_config(config), tensor_w_max_from_config(config)


def resolve_workers(args, config) -> int:
    return args.workers if args.workers is not None else workers_from_config(config)


def cmd_run(args) -> int:
    config, bounds, realization, tensor_w_max = resolve_settings(args)
    report_config = config.get('report') or {}
    fmt = args.format or report_config.get('format', 'text')
    suites = args.suites or ['all']

    safe_print("=" * 70)
    safe_print("SIMPFORGE VERIFY")
    safe_print("=" * 70)
    safe_print(f"Suites: {', '.join(suites)}")
    safe_print("Bounds: " + ", ".join(f"{k}={v}" for k, v in bounds.to_dict().items()))
    if args.mutation:
        safe_print(f"Mutations: {', '.join(args.mutation)}")

    report = run_suite(suites, bounds, realization, mutation_names=args.mutation or (),
                       checks=args.check, tensor_w_max=tensor_w_max, verbose=not args.quiet,
                       workers=resolve_workers(args, config))

    if args.out:
        emit_report(report, fmt, Path(args.out))
        safe_print(f"\nReport written: {args.out}")
    elif fmt == 'json':
        emit_report(report, 'json')
    if report_config.get('save', False):
        path = save_report(report, Path(report_config.get('output_dir', 'output')))
        safe_print(f"Report saved: {path}")

    s = report['summary']
    safe_print(f"\n{'=' * 70}")
    safe_print(f"SUMMARY: {s[PASS]} passed, {s[FAIL]} failed, {s[SKIPPED]} skipped")
    safe_print("=" * 70)
    return exit_code(report)


def cmd_list(args) -> int:
    _, bounds, realization, _ = resolve_settings(args)
    for check_id, anchor in list_checks(args.suites or ['all'], bounds, realization):
        safe_print(f"{check_id}\t{anchor}")
    return 0


def cmd_mutations(args) -> int:
    config, bounds, realization, _ = resolve_settings(args)
    suites = args.suites or ['models', 'homotopy']
    outcome = run_mutations(bounds, realization, suites, names=args.mutation, verbose=True,
                            workers=resolve_workers(args, config))
    missed = [name for name, o in outcome.items() if not o['caught']]

    safe_print(f"\n{'=' * 70}")
    if missed:
        safe_print(f"Mutations NOT caught: {', '.join(missed)}")
        safe_print("=" * 70)
        return 1
    safe_print(f"All {len(outcome)} mutations caught")
    safe_print("=" * 70)
    return 0


def main():
    """
    Main entry point for CLI.
    """
    parser = argparse.ArgumentParser(
        description="simpforge - exact certificates for simplicial algebras over Z[pi]",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Everything at the default bounds
  python verify.py run

  # One suite, smaller levels, JSON report
  python verify.py run --suite simplex --p-max 2 --format json --out output/simplex.json

  # A single check
  python verify.py run --check 'h_tilde.vertex.n=3.i=2.p=2'

  # Eight worker threads
  python verify.py run --workers 8

  # Every check id with its anchor
  python verify.py list --suite homotopy

  # Each formula mutation must break at least one check
  python verify.py mutations

Exit codes: 0 all pass, 1 failures, 2 configuration error
        """
    )
    sub = parser.add_subparsers(dest='command', required=True)

    run = sub.add_parser('run', help='Run the certificate suites')
    add_bound_flags(run)
    run.add_argument('--format', choices=['text', 'json'], help='Report format (default: text)')
    run.add_argument('--out', type=str, help='Write the report to this path')
    run.add_argument('--mutation', action='append', choices=sorted(MUTATIONS),
                     help='Activate a formula mutation (repeatable)')
    run.add_argument('--check', action='append', metavar='ID',
                     help='Only run checks whose id matches this glob (repeatable)')
    run.add_argument('--quiet', action='store_true', help='No per-check lines')
    run.set_defaults(handler=cmd_run)

    listing = sub.add_parser('list', help='List registered check ids')
    add_bound_flags(listing)
    listing.set_defaults(handler=cmd_list)

    muts = sub.add_parser('mutations', help='Run the suites under every formula mutation')
    add_bound_flags(muts)
    muts.add_argument('--mutation', action='append', choices=sorted(MUTATIONS),
                      help='Restrict to these mutations (repeatable)')
    muts.set_defaults(handler=cmd_mutations)

    args = parser.parse_args()

    try:
        sys.exit(args.handler(args))

    except (ConfigError, FileNotFoundError) as e:
        safe_print(f"\n❌ Configuration error: {str(e)}")
        sys.exit(EXIT_CONFIG_ERROR)
    except KeyboardInterrupt:
        safe_print("\n\n⚠️  Verification interrupted by user")
        sys.exit(1)
    except Exception as e:
        safe_print(f"\n❌ Error: {str(e)}")
        sys.exit(1)


if __name__ == "__main__":
    main()
