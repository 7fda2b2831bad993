"""Check manifests: parsing, execution and JSON-lines reports."""

from __future__ import annotations

import json
import time
from pathlib import Path
from typing import IO, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError, model_validator

from bidihedral_verify.services.witnesses import OPERATIONS, run_operation
from bidihedral_verify.utils.config import default_jobs, get_setting
from bidihedral_verify.utils.errors import CapacityError, DomainError, ManifestError
from bidihedral_verify.utils.graph_families import resolve_family
from bidihedral_verify.utils.logger import log_error, log_info, log_warning
from bidihedral_verify.utils.parallel import run_parallel
from bidihedral_verify.utils.paths import get_default_manifest_path

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped(capacity)"

# facts a construct check only computes when the manifest asks for them
_ON_DEMAND = ("aut_order", "arc_transitive", "group_order")


class CheckSpec(BaseModel):
    id: str = Field(min_length=1)
    kind: Literal["construct", "predicate", "equality", "search"]
    family: Optional[str] = None
    params: Dict[str, Any] = Field(default_factory=dict)
    operation: Optional[str] = None
    arguments: Dict[str, Any] = Field(default_factory=dict)
    expect: Dict[str, Any] = Field(default_factory=dict)
    provenance: Literal["PAPER", "TRIVIAL", "DERIVED"]
    citation: str = ""
    skip_reason: Optional[str] = None

    @model_validator(mode="after")
    def _target(self) -> "CheckSpec":
        if self.kind == "construct":
            if not self.family:
                raise ValueError("construct checks need a family")
        elif not self.operation:
            raise ValueError(f"{self.kind} checks need an operation")
        if self.kind == "predicate" and any(not isinstance(v, bool) for v in self.expect.values()):
            raise ValueError("predicate checks expect booleans only")
        return self


class CheckManifest(BaseModel):
    checks: List[CheckSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def _unique_ids(self) -> "CheckManifest":
        seen = set()
        for check in self.checks:
            if check.id in seen:
                raise ValueError(f"duplicate check id {check.id!r}")
            seen.add(check.id)
        return self


class CheckResult(BaseModel):
    id: str
    status: Literal["pass", "fail", "skipped(capacity)"]
    expected: Dict[str, Any]
    actual: Any
    runtime_ms: int = 0
    provenance: str
    citation: str = ""


class CheckReport(BaseModel):
    results: List[CheckResult] = Field(default_factory=list)

    def count(self, status: str) -> int:
        return sum(1 for r in self.results if r.status == status)

    @property
    def summary(self) -> Dict[str, int]:
        return {
            "total": len(self.results),
            "pass": self.count(PASS),
            "fail": self.count(FAIL),
            "skipped": self.count(SKIPPED),
        }

    @property
    def exit_code(self) -> int:
        return 1 if self.count(FAIL) else 0

    def json_lines(self) -> List[str]:
        lines = [json.dumps(r.model_dump(), separators=(", ", ": ")) for r in self.results]
        lines.append(json.dumps({"summary": self.summary}))
        return lines


def _locate(text: str, needle: str) -> tuple:
    index = text.find(needle)
    if index < 0:
        return None, None
    line = text.count("\n", 0, index) + 1
    return line, index - text.rfind("\n", 0, index)


def parse_manifest(text: str) -> CheckManifest:
    """Validate manifest JSON; every error carries a line and column when one is known."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ManifestError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from e
    try:
        manifest = CheckManifest.model_validate(raw)
    except ValidationError as e:
        first = e.errors()[0]
        where = ".".join(str(part) for part in first["loc"])
        line = column = None
        loc = first["loc"]
        if len(loc) >= 2 and loc[0] == "checks" and isinstance(loc[1], int):
            entry = raw["checks"][loc[1]]
            if isinstance(entry, dict) and "id" in entry:
                line, column = _locate(text, json.dumps(entry["id"]))
        raise ManifestError(f"{where}: {first['msg']}", line, column) from e

    for check in manifest.checks:
        line, column = _locate(text, json.dumps(check.id))
        if check.operation is not None and check.operation not in OPERATIONS:
            raise ManifestError(f"check {check.id!r}: unknown operation {check.operation!r}", line, column)
        if check.family is not None:
            try:
                resolve_family(check.family, check.params)
            except DomainError as e:
                raise ManifestError(f"check {check.id!r}: {e}", line, column) from e
    return manifest


def load_manifest(path: Optional[Union[str, Path]] = None) -> CheckManifest:
    target = Path(path) if path is not None else get_default_manifest_path()
    try:
        text = target.read_text(encoding="utf-8")
    except OSError as e:
        raise ManifestError(f"cannot read manifest {target}: {e}") from e
    return parse_manifest(text)


def _normalize(value: Any) -> Any:
    return json.loads(json.dumps(value))


def _facts(check: CheckSpec) -> Dict[str, Any]:
    if check.kind == "construct":
        analyse = [key for key in _ON_DEMAND if key in check.expect]
        return run_operation("family", {"family": check.family, "analyse": analyse, **check.params})
    return run_operation(check.operation or "", check.arguments)


def run_check(check: CheckSpec, include_timing: bool = True) -> CheckResult:
    """Run one check; capacity refusals skip, any other error fails."""
    base = {
        "id": check.id,
        "expected": check.expect,
        "provenance": check.provenance,
        "citation": check.citation,
    }
    if check.skip_reason is not None:
        return CheckResult(status=SKIPPED, actual=check.skip_reason, **base)
    start = time.perf_counter()
    try:
        facts = _normalize(_facts(check))
        actual = {key: facts.get(key) for key in check.expect}
        status = PASS if actual == _normalize(check.expect) else FAIL
    except CapacityError as e:
        status, actual = SKIPPED, str(e)
    except Exception as e:  # noqa: BLE001
        log_error(f"check {check.id} raised {type(e).__name__}: {e}")
        status, actual = FAIL, f"{type(e).__name__}: {e}"
    elapsed = int((time.perf_counter() - start) * 1000) if include_timing else 0
    if status == FAIL:
        log_warning(f"check {check.id} failed: expected {check.expect}, got {actual}")
    return CheckResult(status=status, actual=actual, runtime_ms=elapsed, **base)


def run_manifest(
    manifest: Union[CheckManifest, str, Path, None] = None,
    jobs: Optional[int] = None,
    include_timing: Optional[bool] = None,
) -> CheckReport:
    """Execute every check; results keep manifest order whatever the worker count."""
    if not isinstance(manifest, CheckManifest):
        manifest = load_manifest(manifest)
    workers = jobs if jobs is not None else default_jobs()
    timing = include_timing if include_timing is not None else bool(get_setting("verify.include_timing", True))
    log_info(f"running {len(manifest.checks)} checks with {workers} worker(s)")
    results = run_parallel(
        lambda check: run_check(check, timing),
        manifest.checks,
        max_workers=workers,
        label="check",
        progress_every=int(get_setting("verify.progress_every", 10)),
    )
    report = CheckReport(results=results)
    log_info(f"manifest finished: {report.summary}")
    return report


def write_report(report: CheckReport, stream: IO[str]) -> None:
    for line in report.json_lines():
        stream.write(line + "\n")
