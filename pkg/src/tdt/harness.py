"""Running external programs over a corpus and recording accept/reject behavior.

Acceptance follows the configured policy per parser: ``stderr-empty`` (the
default: any stderr output means reject), ``exit-zero``, or ``both``.  Timeouts
and crashes (termination by signal) are rejects under every policy.  Results
are keyed by (parser index, input index), so the emitted relation is identical
at any parallelism level.
"""

from __future__ import annotations

import json
import shlex
import shutil
import subprocess
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigurationError, FormatError, ValidationError
from .relation import Relation
from .util import canonical_dumps

POLICIES = ("stderr-empty", "exit-zero", "both")
DEFAULT_STDERR_CAP = 64 * 1024


@dataclass(frozen=True)
class ParserSpec:
    name: str
    command: str  # template with an {input} placeholder
    policy: str = "stderr-empty"
    keywords: tuple[str, ...] = ()


@dataclass(frozen=True)
class RunConfig:
    parsers: tuple[ParserSpec, ...]
    corpus: str
    glob: str = "*"
    timeout_secs: float = 30.0
    parallelism: int = 1
    stderr_cap_bytes: int = DEFAULT_STDERR_CAP

    def __post_init__(self):
        names = [p.name for p in self.parsers]
        if not names:
            raise ValidationError("configuration needs at least one parser")
        if len(set(names)) != len(names):
            raise ValidationError("duplicate parser names")
        for p in self.parsers:
            if p.policy not in POLICIES:
                raise ValidationError(f"parser {p.name!r}: unknown policy {p.policy!r}")
            if "{input}" not in p.command:
                raise ValidationError(f"parser {p.name!r}: command lacks an {{input}} placeholder")
        if self.timeout_secs <= 0:
            raise ValidationError("timeout_secs must be > 0")
        if self.parallelism < 1:
            raise ValidationError("parallelism must be >= 1")
        if self.stderr_cap_bytes < 0:
            raise ValidationError("stderr_cap_bytes must be >= 0")


@dataclass(frozen=True)
class RunResult:
    parser: str
    input: str
    accept: bool
    exit_status: int | None
    timed_out: bool
    stderr: bytes
    truncated: bool
    wall_time: float
    error: str | None = None  # launch-level diagnostic, if any


def load_run_config(path) -> RunConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None
    if not isinstance(payload, dict) or "parsers" not in payload or "corpus" not in payload:
        raise FormatError(f"{path}: expected an object with 'parsers' and 'corpus'")
    parsers = []
    for i, entry in enumerate(payload["parsers"]):
        if not isinstance(entry, dict) or "name" not in entry or "command" not in entry:
            raise FormatError(f"{path}: parsers[{i}] needs 'name' and 'command'")
        parsers.append(
            ParserSpec(
                name=entry["name"],
                command=entry["command"],
                policy=entry.get("policy", "stderr-empty"),
                keywords=tuple(entry.get("keywords", [])),
            )
        )
    return RunConfig(
        parsers=tuple(parsers),
        corpus=payload["corpus"],
        glob=payload.get("glob", "*"),
        timeout_secs=payload.get("timeout_secs", 30.0),
        parallelism=payload.get("parallelism", 1),
        stderr_cap_bytes=payload.get("stderr_cap_bytes", DEFAULT_STDERR_CAP),
    )


def _resolve_commands(cfg: RunConfig) -> None:
    """Fail before any execution if some parser's command cannot be used."""
    for p in cfg.parsers:
        try:
            tokens = shlex.split(p.command)
        except ValueError as exc:
            raise ConfigurationError(f"parser {p.name!r}: unparsable command: {exc}") from None
        if not tokens:
            raise ConfigurationError(f"parser {p.name!r}: empty command")
        exe = tokens[0]
        if shutil.which(exe) is None:
            raise ConfigurationError(f"parser {p.name!r}: executable {exe!r} not found")


def _decide(policy: str, returncode: int | None, stderr: bytes, timed_out: bool) -> bool:
    if timed_out or returncode is None or returncode < 0:
        return False
    if policy == "stderr-empty":
        return stderr == b""
    if policy == "exit-zero":
        return returncode == 0
    return stderr == b"" and returncode == 0


def _run_one(spec: ParserSpec, path: Path, input_id: str, cfg: RunConfig) -> RunResult:
    tokens = shlex.split(spec.command)
    resolved = shutil.which(tokens[0])
    if resolved is not None:
        tokens[0] = resolved
    argv = [t.replace("{input}", str(path)) for t in tokens]
    start = time.monotonic()
    timed_out = False
    error = None
    returncode: int | None = None
    stderr = b""
    try:
        # fresh working directory per job: concurrent tools that write
        # scratch files cannot collide
        with tempfile.TemporaryDirectory(prefix="tdt-job-") as workdir:
            proc = subprocess.run(
                argv,
                stdout=subprocess.DEVNULL,
                stderr=subprocess.PIPE,
                timeout=cfg.timeout_secs,
                cwd=workdir,
            )
            returncode = proc.returncode
            stderr = proc.stderr or b""
    except subprocess.TimeoutExpired as exc:
        timed_out = True
        stderr = exc.stderr or b""
    except OSError as exc:
        error = str(exc)
    wall = time.monotonic() - start
    truncated = len(stderr) > cfg.stderr_cap_bytes
    if truncated:
        stderr = stderr[: cfg.stderr_cap_bytes]
    accept = False if error else _decide(spec.policy, returncode, stderr, timed_out)
    return RunResult(
        parser=spec.name,
        input=input_id,
        accept=accept,
        exit_status=returncode,
        timed_out=timed_out,
        stderr=stderr,
        truncated=truncated,
        wall_time=wall,
        error=error,
    )


def run_corpus(cfg: RunConfig) -> tuple[Relation, list[RunResult]]:
    """Execute every (parser, input) pair and materialize the accept relation.

    Rows follow the config's parser order; columns follow sorted filename
    order.  Per-pair I/O failures are recorded as rejects with a diagnostic,
    not raised.
    """
    corpus = Path(cfg.corpus)
    if not corpus.is_dir():
        raise ConfigurationError(f"corpus directory {cfg.corpus!r} does not exist")
    # absolute input paths: jobs run from their own scratch directories
    files = sorted((p.resolve() for p in corpus.glob(cfg.glob) if p.is_file()),
                   key=lambda p: p.name)
    if not files:
        raise ConfigurationError(f"no corpus files match {cfg.glob!r} under {cfg.corpus!r}")
    _resolve_commands(cfg)
    input_ids = [p.name for p in files]
    jobs = [
        (ji, ki, spec, path)
        for ji, spec in enumerate(cfg.parsers)
        for ki, path in enumerate(files)
    ]
    results: dict[tuple[int, int], RunResult] = {}
    with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
        futures = {
            pool.submit(_run_one, spec, path, input_ids[ki], cfg): (ji, ki)
            for ji, ki, spec, path in jobs
        }
        for future, key in futures.items():
            results[key] = future.result()
    matrix = [
        [results[(ji, ki)].accept for ki in range(len(files))]
        for ji in range(len(cfg.parsers))
    ]
    relation = Relation(
        programs=tuple(p.name for p in cfg.parsers),
        inputs=tuple(input_ids),
        accepts=matrix,
    )
    ordered = [results[(ji, ki)] for ji in range(len(cfg.parsers)) for ki in range(len(files))]
    return relation, ordered


def results_jsonl(results: list[RunResult]) -> str:
    """One JSON record per (parser, input); stderr bytes are latin-1 mapped for fidelity."""
    lines = []
    for r in results:
        lines.append(
            json.dumps(
                {
                    "parser": r.parser,
                    "input": r.input,
                    "accept": r.accept,
                    "exit_status": r.exit_status,
                    "timed_out": r.timed_out,
                    "stderr": r.stderr.decode("latin-1"),
                    "truncated": r.truncated,
                    "wall_time": round(r.wall_time, 6),
                    "error": r.error,
                },
                sort_keys=True,
            )
        )
    return "\n".join(lines) + "\n"


def load_results_jsonl(path) -> list[RunResult]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}: line {lineno}: {exc.msg}") from None
            out.append(
                RunResult(
                    parser=rec["parser"],
                    input=rec["input"],
                    accept=rec["accept"],
                    exit_status=rec["exit_status"],
                    timed_out=rec["timed_out"],
                    stderr=rec["stderr"].encode("latin-1"),
                    truncated=rec["truncated"],
                    wall_time=rec["wall_time"],
                    error=rec.get("error"),
                )
            )
    return out


@dataclass(frozen=True)
class KeywordTable:
    """Input x (parser, keyword) booleans: did that keyword appear in that stderr?"""

    inputs: tuple[str, ...]
    columns: tuple[tuple[str, str], ...]  # (parser, keyword)
    cells: tuple[tuple[bool, ...], ...]   # row per input

    def coverage(self, results: list[RunResult]) -> dict[str, bool]:
        """Per rejected input: did at least one keyword match some parser's stderr?"""
        rejected = {r.input for r in results if not r.accept}
        out = {}
        for name, row in zip(self.inputs, self.cells):
            if name in rejected:
                out[name] = any(row)
        return out


def keyword_table(
    results: list[RunResult], keywords_by_parser: dict[str, tuple[str, ...]]
) -> KeywordTable:
    """Case-sensitive byte-substring keyword matches over each parser's captured stderr."""
    if not any(keywords_by_parser.values()):
        raise ValidationError("at least one parser needs a nonempty keyword list")
    inputs: list[str] = []
    for r in results:
        if r.input not in inputs:
            inputs.append(r.input)
    columns = [
        (parser, kw)
        for parser, kws in keywords_by_parser.items()
        for kw in kws
    ]
    stderr_of = {(r.parser, r.input): r.stderr for r in results}
    cells = []
    for name in inputs:
        row = []
        for parser, kw in columns:
            blob = stderr_of.get((parser, name), b"")
            row.append(kw.encode("utf-8") in blob)
        cells.append(tuple(row))
    return KeywordTable(inputs=tuple(inputs), columns=tuple(columns), cells=tuple(cells))


def keyword_table_csv(table: KeywordTable) -> str:
    header = "input," + ",".join(f"{parser}:{kw}" for parser, kw in table.columns)
    lines = [header]
    for name, row in zip(table.inputs, table.cells):
        lines.append(name + "," + ",".join("1" if v else "0" for v in row))
    return "\n".join(lines) + "\n"


def run_summary(rel: Relation, results: list[RunResult]) -> str:
    failures = sum(1 for r in results if r.error)
    timeouts = sum(1 for r in results if r.timed_out)
    lines = [
        f"ran {len(rel.programs)} parsers over {rel.n} inputs "
        f"({len(results)} invocations, {timeouts} timeouts, {failures} launch failures)"
    ]
    for j, name in enumerate(rel.programs):
        accepted = int(rel.accepts[j].sum())
        lines.append(f"  {name}: accepted {accepted}/{rel.n}")
    return "\n".join(lines)


def config_json(cfg: RunConfig) -> str:
    payload = {
        "parsers": [
            {
                "name": p.name,
                "command": p.command,
                "policy": p.policy,
                "keywords": list(p.keywords),
            }
            for p in cfg.parsers
        ],
        "corpus": cfg.corpus,
        "glob": cfg.glob,
        "timeout_secs": cfg.timeout_secs,
        "parallelism": cfg.parallelism,
        "stderr_cap_bytes": cfg.stderr_cap_bytes,
    }
    return canonical_dumps(payload)
