"""
Verification Harness Module
Bounds and configuration, the check registry, suite runs, machine-readable
reports and the mutation sweep
"""

import copy
import fnmatch
import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import yaml
from dotenv import load_dotenv

from modules import doldkan, homotopy, hopf, models, mutations, salg, simplex
from modules.checks import (
    FAIL,
    PASS,
    SKIPPED,
    CheckResult,
    CheckSpec,
    print_result,
    run_check,
    safe_print,
    skipped,
)
from modules.homotopy import DEFAULT_REALIZATION, Realization
from modules.models import DVector, enumerate_d_vectors

VERSION = "1.0"
SUITES = ('simplex', 'salg', 'models', 'homotopy', 'homology', 'hopf')
DEFAULT_CONFIG_PATH = Path("config/config.yaml")
PRESENTATIONS_DIR = Path(__file__).resolve().parent.parent / "config" / "presentations"
DEFAULT_TENSOR_W_MAX = 4
DEFAULT_WORKERS = 4

# Id prefixes of the homotopy suite
HOMOTOPY_PREFIXES = ("h_tilde", "h_small", "k_small", "t_factor", "masterH", "masterK")

# Presentations handed to the salg suite
SALG_MODELS = (models.kA(2), models.kA_tensor(2, 1), models.K_A)


class ConfigError(ValueError):
    """Invalid configuration file contents, bounds or suite names."""


@dataclass(frozen=True)
class Bounds:
    """
    Finite truncation of every claim: levels, factor counts, m + k, weights,
    and how d-vectors are chosen ('exhaustive' or 'sample:COUNT:SEED').
    """

    p_max: int = 4
    n_max: int = 4
    mk_max: int = 3
    w_max: int = 8
    d_policy: str = 'exhaustive'

    def __post_init__(self):
        for name in ('p_max', 'n_max', 'mk_max', 'w_max'):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool):
                raise ConfigError(f"{name} must be an integer, got {value!r}")
        if self.p_max < 2:
            raise ConfigError(f"p_max must be >= 2 (faces need two levels), got {self.p_max}")
        if self.n_max < 1:
            raise ConfigError(f"n_max must be >= 1, got {self.n_max}")
        if self.mk_max < 0 or self.w_max < 0:
            raise ConfigError("mk_max and w_max must be non-negative")
        self.sample  # raises ConfigError on a malformed policy

    @property
    def sample(self) -> Optional[Tuple[int, int]]:
        """(count, seed) for a sampling policy, None when exhaustive."""
        if not isinstance(self.d_policy, str):
            raise ConfigError(f"d_policy must be a string, got {self.d_policy!r}")
        if self.d_policy == 'exhaustive':
            return None
        parts = self.d_policy.split(':')
        if len(parts) != 3 or parts[0] != 'sample':
            raise ConfigError(f"d_policy must be 'exhaustive' or 'sample:COUNT:SEED', got {self.d_policy!r}")
        try:
            count, seed = int(parts[1]), int(parts[2])
        except ValueError:
            raise ConfigError(f"Non-integer sample parameters in {self.d_policy!r}")
        if count < 1:
            raise ConfigError(f"Sample count must be >= 1, got {count}")
        if seed < 0:
            raise ConfigError(f"Sample seed must be >= 0, got {seed}")
        return count, seed

    def d_vectors(self, lo: int, hi: int) -> List[DVector]:
        """The d-vectors (d_lo, ..., d_hi) to check; the empty vector when hi < lo."""
        if hi < lo:
            return [DVector(lo, ())]
        vectors = enumerate_d_vectors(lo, hi)
        sample = self.sample
        if sample is None or sample[0] >= len(vectors):
            return vectors
        count, seed = sample
        rng = np.random.default_rng([seed, lo, hi])
        picked = sorted(rng.choice(len(vectors), size=count, replace=False).tolist())
        return [vectors[i] for i in picked]

    def to_dict(self) -> Dict[str, Any]:
        return {
            'p_max': self.p_max,
            'n_max': self.n_max,
            'mk_max': self.mk_max,
            'w_max': self.w_max,
            'd_policy': self.d_policy,
        }

    @classmethod
    def from_config(cls, config: Optional[Dict]) -> "Bounds":
        """
        Bounds from the `bounds` section of a configuration dict.

        Raises:
            ConfigError: On unknown keys or invalid values
        """
        section = (config or {}).get('bounds') or {}
        if not isinstance(section, dict):
            raise ConfigError("'bounds' must be a mapping")
        unknown = set(section) - set(cls().to_dict())
        if unknown:
            raise ConfigError(f"Unknown bounds key(s): {', '.join(sorted(unknown))}")
        return cls(**section)

    def with_overrides(self, **overrides) -> "Bounds":
        """Copy with every non-None override applied (command-line flags)."""
        values = self.to_dict()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return Bounds(**values)


def load_config(config_path: Optional[Path] = None) -> Dict:
    """
    Load configuration from YAML (or JSON) file.

    Args:
        config_path: Path to config file; defaults to $SIMPFORGE_CONFIG, then config/config.yaml

    Returns:
        Configuration dictionary

    Raises:
        FileNotFoundError: If config file doesn't exist
        ConfigError: If the file is not a YAML mapping
    """
    load_dotenv()
    config_path = Path(config_path or os.getenv("SIMPFORGE_CONFIG") or DEFAULT_CONFIG_PATH)

    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")

    with open(config_path, 'r', encoding='utf-8') as f:
        try:
            config = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"Invalid config file {config_path}: {e}")
    if config is None:
        return {}
    if not isinstance(config, dict):
        raise ConfigError(f"Config file {config_path} must contain a mapping")
    return config


def realization_from_config(config: Optional[Dict]) -> Realization:
    section = (config or {}).get('homotopy') or {}
    try:
        return Realization(**section)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"Invalid homotopy section: {e}")


def tensor_w_max_from_config(config: Optional[Dict]) -> int:
    value = ((config or {}).get('homology') or {}).get('tensor_w_max', DEFAULT_TENSOR_W_MAX)
    if not isinstance(value, int) or value < 0:
        raise ConfigError(f"homology.tensor_w_max must be a non-negative integer, got {value!r}")
    return value


# Registry

def expand_suites(suites: Iterable[str]) -> List[str]:
    """
    Resolve 'all' and validate names, keeping the canonical suite order.

    Raises:
        ConfigError: On an unknown suite name
    """
    requested = set()
    for suite in suites or ['all']:
        if suite == 'all':
            requested.update(SUITES)
        elif suite in SUITES:
            requested.add(suite)
        else:
            raise ConfigError(f"Unknown suite: {suite} (choose from {', '.join(SUITES + ('all',))})")
    return [s for s in SUITES if s in requested]


def registry(suites: Iterable[str], bounds: Bounds, realization: Realization = DEFAULT_REALIZATION,
             tensor_w_max: int = DEFAULT_TENSOR_W_MAX) -> List[CheckSpec]:
    """Every registered check of the requested suites, in suite order."""
    specs: List[CheckSpec] = []
    for suite in expand_suites(suites):
        if suite == 'simplex':
            specs.extend(simplex.registered_checks(bounds))
        elif suite == 'salg':
            presentations = {str(m): models.build(m) for m in SALG_MODELS}
            declarative = {
                'kA2': (PRESENTATIONS_DIR / "kA2.yaml", models.build(models.kA(2))),
                'K_A': (PRESENTATIONS_DIR / "K_A.json", models.build(models.K_A)),
            }
            specs.extend(salg.registered_checks(bounds, presentations, declarative))
        elif suite == 'models':
            specs.extend(models.registered_checks(bounds))
        elif suite == 'homotopy':
            specs.extend(homotopy.registered_checks(bounds, realization))
        elif suite == 'homology':
            specs.extend(doldkan.registered_checks(bounds, tensor_w_max))
        elif suite == 'hopf':
            specs.extend(hopf.registered_checks(bounds, tensor_w_max))
    return specs


def select(specs: Sequence[CheckSpec], patterns: Optional[Sequence[str]]) -> List[CheckSpec]:
    """Keep the specs whose id matches one of the glob patterns (all when none given)."""
    if not patterns:
        return list(specs)
    return [s for s in specs if any(fnmatch.fnmatchcase(s.id, p) for p in patterns)]


def list_checks(suites: Iterable[str], bounds: Optional[Bounds] = None,
                realization: Realization = DEFAULT_REALIZATION) -> List[Tuple[str, str]]:
    """(id, anchor) of every registered check, without running anything."""
    return [(s.id, s.anchor) for s in registry(suites, bounds or Bounds(), realization)]


# Every pattern must match at least one registered id at default bounds.
STATIC_MANIFEST = (
    'simplex.relations.*', 'simplex.enumerate.*', 'simplex.decompose.*', 'simplex.s_alpha.*',
    'salg.presentation.const', 'salg.presentation.*', 'salg.identity.*', 'salg.simplex_tensor.*',
    'salg.label.*', 'salg.vertex.*', 'salg.tensor_unit.*', 'salg.declarative.*',
    'models.presentation.*', 'models.can.m*', 'models.can.compose.*', 'models.rho.*', 'models.zeta.*',
    'models.skip.*', 'models.f_vs_g.*', 'models.composite_f_vs_g.*', 'models.aux.*',
    'h_tilde.simplicial.n=2', 'h_tilde.telescoping.*', 'h_tilde.vertex.*',
    'h_small.vertex.*', 'k_small.vertex.*', 't_factor.vertex.*',
    'masterH.simplicial.*', 'masterH.vertex.*', 'masterH.diagram.*',
    'masterK.simplicial.*', 'masterK.vertex.*', 'masterK.diagram.*',
    'homology.kA.*', 'homology.K_A.*', 'homology.kA_tensor.*', 'homology.pi0.*',
    'homology.pi0_vs_h0.*', 'homology.shuffle.*', 'homology.sympy.*', 'homology.induced.*',
    'hopf.certify.*', 'hopf.coassociativity', 'hopf.counit.*', 'hopf.source', 'hopf.target',
    'hopf.antipode.*', 'hopf.purechar.comult', 'hopf.purechar.*', 'hopf.purechar.homology.*',
    'hopf.generic.comult_witness',
)


def audit_registry(specs: Sequence[CheckSpec]) -> Dict[str, List[str]]:
    """
    Compare a registry against STATIC_MANIFEST.

    Returns:
        {'missing': manifest patterns nothing matches,
         'duplicates': ids registered more than once,
         'unlisted': ids no manifest pattern covers}
    """
    ids = [s.id for s in specs]
    seen, duplicates = set(), []
    for check_id in ids:
        if check_id in seen and check_id not in duplicates:
            duplicates.append(check_id)
        seen.add(check_id)
    missing = [p for p in STATIC_MANIFEST if not any(fnmatch.fnmatchcase(i, p) for i in ids)]
    unlisted = [i for i in ids if not any(fnmatch.fnmatchcase(i, p) for p in STATIC_MANIFEST)]
    return {'missing': missing, 'duplicates': duplicates, 'unlisted': unlisted}


# Runs

def summarize(results: Iterable[Dict]) -> Dict[str, int]:
    summary = {PASS: 0, FAIL: 0, SKIPPED: 0}
    for r in results:
        summary[r['status']] += 1
    return summary


def suite_of(check_id: str) -> Optional[str]:
    """The suite an id (or id glob) belongs to, from its first component."""
    head = check_id.split('.', 1)[0]
    if head in SUITES:
        return head
    if head in HOMOTOPY_PREFIXES:
        return 'homotopy'
    return None


def unmatched_records(specs: Sequence[CheckSpec], patterns: Optional[Sequence[str]],
                      suite_names: Sequence[str]) -> List[Dict]:
    """A skipped record for every requested id glob that no check within bounds matches."""
    records = []
    for pattern in patterns or ():
        if any(fnmatch.fnmatchcase(s.id, pattern) for s in specs):
            continue
        suite = suite_of(pattern)
        if suite in suite_names:
            result = skipped(pattern, detail="no registered check within the bounds matches this id")
            records.append({**result.to_dict(), 'suite': suite})
    return records


def workers_from_config(config: Optional[Dict]) -> int:
    value = ((config or {}).get('run') or {}).get('workers', DEFAULT_WORKERS)
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ConfigError(f"run.workers must be a positive integer, got {value!r}")
    return value


def run_suite(suites: Iterable[str], bounds: Bounds, realization: Realization = DEFAULT_REALIZATION,
              mutation_names: Sequence[str] = (), checks: Optional[Sequence[str]] = None,
              tensor_w_max: int = DEFAULT_TENSOR_W_MAX, verbose: bool = False,
              workers: int = DEFAULT_WORKERS) -> Dict:
    """
    Run every registered check of the suites within bounds.

    Args:
        suites: Suite names, 'all' allowed
        bounds: Truncation bounds
        realization: Reading of the ambiguous homotopy displays
        mutation_names: Formula mutations active during the run
        checks: Optional id globs restricting the run; a glob matching nothing is reported as skipped
        tensor_w_max: Weight cap for the K_A-family complexes
        verbose: Print a banner per suite and a line per check
        workers: Size of the thread pool the checks run in

    Returns:
        Report dict {version, bounds, started_at, suites, mutations, realizations, checks, summary}
    """
    if workers < 1:
        raise ConfigError(f"workers must be >= 1, got {workers}")
    suite_names = expand_suites(suites)
    started_at = datetime.now().isoformat(timespec='seconds')
    specs = select(registry(suite_names, bounds, realization, tensor_w_max), checks)

    records = []
    with mutations.applied(*mutation_names):
        with ThreadPoolExecutor(max_workers=workers) as pool:
            # map yields in submission order
            current = None
            for spec, result in zip(specs, pool.map(run_check, specs)):
                if verbose and spec.suite != current:
                    current = spec.suite
                    safe_print(f"\n{'=' * 70}")
                    safe_print(f"SUITE: {current}")
                    safe_print(f"{'=' * 70}")
                if verbose:
                    print_result(result)
                records.append({**result.to_dict(), 'suite': spec.suite})
    for record in unmatched_records(specs, checks, suite_names):
        if verbose:
            print_result(CheckResult.from_dict(record))
        records.append(record)

    return {
        'version': VERSION,
        'bounds': bounds.to_dict(),
        'started_at': started_at,
        'suites': suite_names,
        'mutations': sorted(mutation_names),
        'realizations': {
            'homotopy': realization.to_dict(),
            'hopf': dict(hopf.REALIZATION),
            'tensor_w_max': tensor_w_max,
        },
        'checks': records,
        'summary': summarize(records),
    }


def exit_code(report: Dict) -> int:
    return 0 if report['summary'].get(FAIL, 0) == 0 else 1


def report_results(report: Dict) -> List[CheckResult]:
    return [CheckResult.from_dict(r) for r in report['checks']]


# Reports

def render_text(report: Dict) -> str:
    """Human-ordered report: one block per suite, counterexamples in canonical text."""
    lines = [
        "=" * 70,
        f"simpforge verify report (version {report['version']})",
        "=" * 70,
        f"Started: {report['started_at']}",
        "Bounds: " + ", ".join(f"{k}={v}" for k, v in sorted(report['bounds'].items())),
    ]
    if report.get('mutations'):
        lines.append("Mutations: " + ", ".join(report['mutations']))
    for suite in report['suites']:
        records = [r for r in report['checks'] if r.get('suite') == suite]
        lines += ["", "-" * 70, f"{suite} ({len(records)} checks)", "-" * 70]
        for r in records:
            tag = {PASS: "PASS", FAIL: "FAIL", SKIPPED: "SKIP"}[r['status']]
            lines.append(f"[{tag}] {r['id']}" + (f"  -- {r['anchor']}" if r.get('anchor') else ""))
            ce = r.get('counterexample')
            if ce:
                lines.append(f"       level={ce['level']} index={ce['index']} generator={ce['generator']}")
                lines.append(f"       lhs: {ce['lhs']}")
                lines.append(f"       rhs: {ce['rhs']}")
    s = report['summary']
    lines += ["", "=" * 70,
              f"SUMMARY: {s[PASS]} passed, {s[FAIL]} failed, {s[SKIPPED]} skipped",
              "=" * 70]
    return "\n".join(lines) + "\n"


def render_json(report: Dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def emit_report(report: Dict, fmt: str = 'text', path: Optional[Path] = None):
    """
    Write the report as text or JSON to path, or to stdout when path is None.

    Raises:
        ValueError: On an unknown format
    """
    if fmt == 'json':
        text = render_json(report)
    elif fmt == 'text':
        text = render_text(report)
    else:
        raise ValueError(f"Unknown report format: {fmt}")
    if path is None:
        safe_print(text.rstrip("\n"))
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)


def save_report(report: Dict, output_dir: Path = Path("output")) -> Path:
    """
    Save the report as timestamped JSON.

    Returns:
        Path to saved report file
    """
    output_dir = Path(output_dir)
    output_dir.mkdir(parents=True, exist_ok=True)

    timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
    suites = "-".join(report.get('suites') or ['none'])
    report_path = output_dir / f"verify_report_{suites}_{timestamp}.json"
    emit_report(report, 'json', report_path)
    return report_path


def load_report(path: Path) -> Dict:
    with open(path, 'r', encoding='utf-8') as f:
        return json.load(f)


def canonical_report(report: Dict) -> Dict:
    """The report without timing fields, for determinism comparisons."""
    canonical = copy.deepcopy(report)
    canonical.pop('started_at', None)
    for r in canonical.get('checks', []):
        r.pop('millis', None)
    return canonical


# Mutation sweep

def run_mutations(bounds: Bounds, realization: Realization = DEFAULT_REALIZATION,
                  suites: Sequence[str] = ('models', 'homotopy'),
                  names: Optional[Sequence[str]] = None, verbose: bool = False,
                  workers: int = DEFAULT_WORKERS) -> Dict[str, Dict]:
    """
    Run the suites once per mutation; each mutation must make at least one check fail.

    Returns:
        name -> {'caught', 'fail', 'first_failure', 'counterexample'}
    """
    outcome = {}
    for name in names or sorted(mutations.MUTATIONS):
        if verbose:
            safe_print(f"\n{'-' * 70}")
            safe_print(f"MUTATION: {name} ({mutations.MUTATIONS[name]})")
            safe_print(f"{'-' * 70}")
        report = run_suite(suites, bounds, realization, mutation_names=[name], workers=workers)
        failures = [r for r in report['checks'] if r['status'] == FAIL]
        outcome[name] = {
            'caught': bool(failures),
            'fail': len(failures),
            'first_failure': failures[0]['id'] if failures else None,
            'counterexample': failures[0]['counterexample'] if failures else None,
        }
        if verbose:
            if failures:
                print_result(CheckResult.from_dict(failures[0]))
            safe_print(f"{name}: {len(failures)} failing check(s)" if failures else f"{name}: NOT CAUGHT")
    return outcome
