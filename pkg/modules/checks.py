"""
Check Results Module
Structured pass/fail/skipped records shared by every certificate, plus the
console helpers used by the command-line scripts
"""

import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"


def safe_print(text):
    try:
        print(text)
    except UnicodeEncodeError:
        # Drop what the console cannot encode and try again
        print(text.encode('ascii', 'ignore').decode('ascii'))


@dataclass
class Counterexample:
    """Where a certificate broke: level, index, generator and both sides as canonical text."""

    level: Optional[int]
    index: Optional[int]
    generator: str
    lhs: str
    rhs: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            'level': self.level,
            'index': self.index,
            'generator': self.generator,
            'lhs': self.lhs,
            'rhs': self.rhs,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Counterexample":
        return cls(data.get('level'), data.get('index'), data['generator'], data['lhs'], data['rhs'])


@dataclass
class CheckResult:
    id: str
    status: str
    params: Dict[str, Any] = field(default_factory=dict)
    millis: int = 0
    counterexample: Optional[Counterexample] = None
    anchor: str = ""
    detail: str = ""

    def __post_init__(self):
        if self.status not in (PASS, FAIL, SKIPPED):
            raise ValueError(f"Unknown check status: {self.status}")
        if self.status == FAIL and self.counterexample is None:
            raise ValueError(f"Failing check {self.id} must carry a counterexample")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def with_id(self, check_id: str, anchor: str = "") -> "CheckResult":
        """Copy of this result re-labelled for the registry."""
        return CheckResult(check_id, self.status, dict(self.params), self.millis,
                           self.counterexample, anchor or self.anchor, self.detail)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'id': self.id,
            'status': self.status,
            'params': {k: _jsonable(v) for k, v in self.params.items()},
            'millis': self.millis,
            'counterexample': self.counterexample.to_dict() if self.counterexample else None,
            'anchor': self.anchor,
            'detail': self.detail,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CheckResult":
        ce = data.get('counterexample')
        return cls(
            id=data['id'],
            status=data['status'],
            params=dict(data.get('params', {})),
            millis=data.get('millis', 0),
            counterexample=Counterexample.from_dict(ce) if ce else None,
            anchor=data.get('anchor', ""),
            detail=data.get('detail', ""),
        )


def _jsonable(value):
    if isinstance(value, (int, str, bool, float)) or value is None:
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    return str(value)


def passed(check_id: str, detail: str = "", **params) -> CheckResult:
    return CheckResult(check_id, PASS, params, detail=detail)


def failed(check_id: str, counterexample: Counterexample, detail: str = "", **params) -> CheckResult:
    return CheckResult(check_id, FAIL, params, counterexample=counterexample, detail=detail)


def skipped(check_id: str, detail: str = "", **params) -> CheckResult:
    return CheckResult(check_id, SKIPPED, params, detail=detail)


def first_failure(check_id: str, results: Iterable[CheckResult], **params) -> CheckResult:
    """Collapse several results into one: the first failure, else a pass."""
    count = 0
    for result in results:
        count += 1
        if result.status == FAIL:
            return CheckResult(check_id, FAIL, {**result.params, **params},
                               counterexample=result.counterexample,
                               detail=result.detail or result.id)
    return passed(check_id, parts=count, **params)


@contextmanager
def stopwatch(record: List[int]):
    """Append the elapsed milliseconds of the block to `record`."""
    start = time.perf_counter()
    try:
        yield
    finally:
        record.append(int((time.perf_counter() - start) * 1000))


@dataclass(frozen=True)
class CheckSpec:
    """A registered check: stable id, suite, source anchor and a thunk producing the result."""

    id: str
    suite: str
    anchor: str
    run: Callable[[], CheckResult] = field(compare=False)


def run_check(spec: CheckSpec) -> CheckResult:
    """Run one check, timing it; an exception inside the check is recorded as a failure."""
    elapsed: List[int] = []
    try:
        with stopwatch(elapsed):
            result = spec.run()
    except Exception as e:
        ce = Counterexample(None, None, "exception", type(e).__name__, str(e))
        result = failed(spec.id, ce, detail="check raised")
    result = result.with_id(spec.id, spec.anchor)
    result.millis = elapsed[0] if elapsed else 0
    return result


def print_result(result: CheckResult):
    tag = {PASS: "PASS", FAIL: "FAIL", SKIPPED: "SKIP"}[result.status]
    if result.status == PASS:
        safe_print(f"[{tag}] {result.id} ({result.millis} ms)")
        return
    safe_print(f"[{tag}] {result.id}")
    ce = result.counterexample
    if ce is not None:
        safe_print(f"       level={ce.level} index={ce.index} generator={ce.generator}")
        safe_print(f"       lhs: {ce.lhs}")
        safe_print(f"       rhs: {ce.rhs}")
    elif result.detail:
        safe_print(f"       {result.detail}")


def run_specs(specs: Iterable[CheckSpec], verbose: bool = False) -> List[CheckResult]:
    results = []
    for spec in specs:
        result = run_check(spec)
        if verbose:
            print_result(result)
        results.append(result)
    return results
