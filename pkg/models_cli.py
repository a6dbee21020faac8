"""
simpforge model CLI
Dump the expanded levels of a built-in or declarative presentation, or
certify the built-in models
"""

import argparse
import sys
from pathlib import Path

from modules.checks import print_result, safe_print
from modules.models import ModelId, all_model_ids, build, check_model
from modules.salg import PresentationError, check_presentation, dump_presentation_json, load_presentation


def cmd_dump(args) -> int:
    if args.file:
        presentation = load_presentation(Path(args.file))
    else:
        presentation = build(ModelId.parse(args.id))
    text = dump_presentation_json(presentation, args.p_max)
    if args.out:
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text + "\n", encoding='utf-8')
        safe_print(f"✓ Levels 0..{args.p_max} of {presentation.name} written: {out}")
    else:
        safe_print(text)
    return 0


def cmd_check(args) -> int:
    if args.all:
        results = [check_model(model, args.p_max) for model in all_model_ids()]
    elif args.file:
        P = load_presentation(Path(args.file))
        results = [check_presentation(P, args.p_max, f"models.presentation.{P.name}")]
    else:
        results = [check_model(ModelId.parse(args.id), args.p_max)]

    safe_print("=" * 70)
    safe_print(f"MODEL CHECK (p_max={args.p_max})")
    safe_print("=" * 70)
    for result in results:
        print_result(result)
    failures = sum(1 for r in results if not r.passed)
    safe_print("-" * 70)
    safe_print(f"{len(results) - failures}/{len(results)} presentations pass")
    return 1 if failures else 0


def main():
    """
    Main entry point for CLI.
    """
    parser = argparse.ArgumentParser(
        description="simpforge models - inspect and certify presentations",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python models_cli.py dump --id 'kA(2)' --p-max 3
  python models_cli.py dump --file config/presentations/kA2.yaml --p-max 2 --out output/kA2.json
  python models_cli.py check --all --p-max 4
  python models_cli.py check --id 'K_A_tensor_kA(3)'
        """
    )
    sub = parser.add_subparsers(dest='command', required=True)

    for name, handler, help_text in (('dump', cmd_dump, 'Emit expanded levels as JSON'),
                                     ('check', cmd_check, 'Certify simplicial identities')):
        command = sub.add_parser(name, help=help_text)
        source = command.add_mutually_exclusive_group(required=True)
        source.add_argument('--id', help="Built-in model id, e.g. 'kA(2)' or 'kA_tensor(3,1)'")
        source.add_argument('--file', help='Declarative presentation file (YAML or JSON)')
        if name == 'check':
            source.add_argument('--all', action='store_true', help='Every built-in model')
        else:
            command.add_argument('--out', help='Write to this path instead of stdout')
        command.add_argument('--p-max', type=int, default=3 if name == 'dump' else 4,
                             help='Highest level (default: 3 for dump, 4 for check)')
        command.set_defaults(handler=handler)

    args = parser.parse_args()

    try:
        sys.exit(args.handler(args))

    except (PresentationError, ValueError, FileNotFoundError) as e:
        safe_print(f"\n❌ Error: {str(e)}")
        sys.exit(2)
    except KeyboardInterrupt:
        safe_print("\n\n⚠️  Interrupted by user")
        sys.exit(1)
    except Exception as e:
        safe_print(f"\n❌ Error: {str(e)}")
        sys.exit(1)


if __name__ == "__main__":
    main()
