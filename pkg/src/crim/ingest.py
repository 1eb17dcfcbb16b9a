"""Commit extraction from git repositories and the canonical commit CSV."""

from __future__ import annotations

import csv
import logging
import re
import subprocess
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterable, Optional

from crim.config import AnalysisConfig
from crim.diffsize import decode_text, word_levenshtein, tokenize
from crim.errors import MalformedHeader, NotARepository, UnreadableObject

logger = logging.getLogger(__name__)

CSV_HEADER = ["commit_id", "author_id", "author_timestamp_utc", "size_words", "is_merge"]
TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%SZ"

_HEX_RE = re.compile(r"[0-9a-fA-F]+")
_TIMESTAMP_RE = re.compile(r"\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z")
_SIZE_RE = re.compile(r"[0-9]+")
_NULL_SHA_RE = re.compile(r"0+")
_GITLINK_MODE = "160000"
_FIELD_SEP = "\x1f"
_RECORD_SEP = "\x1e"


@dataclass(frozen=True)
class RawCommit:
    commit_id: str
    author_id: str
    author_timestamp: datetime
    size_words: int
    is_merge: bool = False

    def __post_init__(self) -> None:
        if self.size_words < 0:
            raise ValueError(f"size_words must be nonnegative, got {self.size_words}")
        if self.author_timestamp.tzinfo is None:
            raise ValueError("author_timestamp must be timezone-aware")

    @property
    def sort_key(self) -> tuple[datetime, str]:
        return (self.author_timestamp, self.commit_id)


def normalize_author(email: str, name: str) -> str:
    """Lower-cased trimmed email, falling back to the lower-cased name."""
    email = email.strip().lower()
    return email if email else name.strip().lower()


def format_timestamp(ts: datetime) -> str:
    return ts.astimezone(timezone.utc).strftime(TIMESTAMP_FORMAT)


def parse_timestamp(text: str) -> datetime:
    if not _TIMESTAMP_RE.fullmatch(text):
        raise ValueError(f"bad timestamp {text!r}")
    return datetime.strptime(text, TIMESTAMP_FORMAT).replace(tzinfo=timezone.utc)


# --------------------------------------------------------------------------- git


@dataclass
class Extraction:
    """Result of walking a repository, with tallies of what was left out."""

    commits: list[RawCommit]
    skipped_commits: list[str] = field(default_factory=list)
    merges_excluded: int = 0
    binary_files: int = 0


@dataclass(frozen=True)
class _LogEntry:
    commit_id: str
    parents: tuple[str, ...]
    author_id: str
    author_timestamp: datetime


def _git(repo: Path, *args: str) -> subprocess.CompletedProcess:
    return subprocess.run(["git", "-C", str(repo), *args], capture_output=True, check=False)


class _BlobReader:
    """One long-lived ``git cat-file --batch`` process."""

    def __init__(self, repo: Path):
        self._proc = subprocess.Popen(
            ["git", "-C", str(repo), "cat-file", "--batch"],
            stdin=subprocess.PIPE,
            stdout=subprocess.PIPE,
        )

    def read(self, sha: str) -> Optional[bytes]:
        assert self._proc.stdin is not None and self._proc.stdout is not None
        self._proc.stdin.write(sha.encode() + b"\n")
        self._proc.stdin.flush()
        header = self._proc.stdout.readline().split()
        if len(header) != 3:
            return None
        size = int(header[2])
        data = self._proc.stdout.read(size)
        self._proc.stdout.read(1)
        return data

    def close(self) -> None:
        if self._proc.stdin:
            self._proc.stdin.close()
        self._proc.wait()


class _Sizer:
    """Computes size_words per commit; safe to call from several threads."""

    def __init__(self, repo: Path):
        self.repo = repo
        self._local = threading.local()
        self._readers: list[_BlobReader] = []
        self._lock = threading.Lock()
        self.binary_files = 0

    def _reader(self) -> _BlobReader:
        reader = getattr(self._local, "reader", None)
        if reader is None:
            reader = _BlobReader(self.repo)
            self._local.reader = reader
            with self._lock:
                self._readers.append(reader)
        return reader

    def _text(self, commit_id: str, sha: str) -> Optional[str]:
        if _NULL_SHA_RE.fullmatch(sha):
            return ""
        data = self._reader().read(sha)
        if data is None:
            raise UnreadableObject(commit_id, f"blob {sha}")
        return decode_text(data)

    def size(self, entry: _LogEntry) -> int:
        if entry.parents:
            args = ["diff-tree", "-r", "-z", "--no-renames", entry.parents[0], entry.commit_id]
        else:
            args = ["diff-tree", "-r", "-z", "--no-renames", "--root", "--no-commit-id", entry.commit_id]
        proc = _git(self.repo, *args)
        if proc.returncode != 0:
            raise UnreadableObject(entry.commit_id, proc.stderr.decode(errors="replace").strip())

        total = 0
        binary = 0
        parts = proc.stdout.split(b"\x00")
        # -z raw format: ":<old mode> <new mode> <old sha> <new sha> <status>" NUL <path> NUL
        for i in range(0, len(parts) - 1, 2):
            meta = parts[i].decode().lstrip(":").split()
            if len(meta) < 5:
                continue
            old_mode, new_mode, old_sha, new_sha = meta[:4]
            if _GITLINK_MODE in (old_mode, new_mode):
                continue
            before = self._text(entry.commit_id, old_sha)
            after = self._text(entry.commit_id, new_sha)
            if before is None or after is None:
                binary += 1
                continue
            total += word_levenshtein(tokenize(before), tokenize(after))
        if binary:
            with self._lock:
                self.binary_files += binary
        return total

    def close(self) -> None:
        for reader in self._readers:
            reader.close()


def _read_log(repo: Path) -> list[_LogEntry]:
    refs = ["--branches", "--tags", "--remotes"]
    if _git(repo, "rev-parse", "--verify", "-q", "HEAD").returncode == 0:
        refs.append("HEAD")
    fmt = _FIELD_SEP.join(["%H", "%P", "%ae", "%an", "%at"]) + _RECORD_SEP
    proc = _git(repo, "log", f"--format={fmt}", *refs)
    if proc.returncode != 0:
        raise NotARepository(f"{repo}: {proc.stderr.decode(errors='replace').strip()}")

    entries = []
    for record in proc.stdout.decode("utf-8", errors="replace").split(_RECORD_SEP):
        record = record.strip("\n")
        if not record:
            continue
        sha, parents, email, name, stamp = record.split(_FIELD_SEP)
        entries.append(
            _LogEntry(
                commit_id=sha,
                parents=tuple(parents.split()),
                author_id=normalize_author(email, name),
                author_timestamp=datetime.fromtimestamp(int(stamp), tz=timezone.utc),
            )
        )
    return entries


def extract(repo_path: str | Path, cfg: AnalysisConfig | None = None, workers: int = 1) -> Extraction:
    """Walk every commit reachable from branches, tags, remotes and HEAD.

    Sizes are computed against the first parent (the empty tree for root
    commits). Output is sorted by (author timestamp, commit id) no matter how
    many workers run.
    """
    cfg = cfg or AnalysisConfig()
    repo = Path(repo_path)
    if not repo.is_dir() or _git(repo, "rev-parse", "--git-dir").returncode != 0:
        raise NotARepository(str(repo_path))

    entries = _read_log(repo)
    merges = [e for e in entries if len(e.parents) > 1]
    if cfg.exclude_merges:
        entries = [e for e in entries if len(e.parents) <= 1]

    sizer = _Sizer(repo)
    result = Extraction(commits=[], merges_excluded=len(merges) if cfg.exclude_merges else 0)

    def work(entry: _LogEntry) -> Optional[RawCommit]:
        try:
            size = sizer.size(entry)
        except UnreadableObject as exc:
            logger.warning("skipping commit: %s", exc)
            return None
        return RawCommit(
            commit_id=entry.commit_id,
            author_id=entry.author_id,
            author_timestamp=entry.author_timestamp,
            size_words=size,
            is_merge=len(entry.parents) > 1,
        )

    try:
        if workers <= 1:
            records = [work(e) for e in entries]
        else:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                records = list(pool.map(work, entries))
    finally:
        sizer.close()

    for entry, record in zip(entries, records):
        if record is None:
            result.skipped_commits.append(entry.commit_id)
        else:
            result.commits.append(record)
    result.commits.sort(key=lambda c: c.sort_key)
    result.skipped_commits.sort()
    result.binary_files = sizer.binary_files
    return result


def extract_commits(repo_path: str | Path, cfg: AnalysisConfig | None = None, workers: int = 1) -> list[RawCommit]:
    return extract(repo_path, cfg, workers).commits


# --------------------------------------------------------------------------- csv


@dataclass
class CsvLoad:
    records: list[RawCommit]
    dropped: int = 0


def _parse_row(row: list[str]) -> RawCommit:
    if len(row) != len(CSV_HEADER):
        raise ValueError(f"expected {len(CSV_HEADER)} fields, got {len(row)}")
    commit_id, author_id, stamp, size, is_merge = row
    if not _HEX_RE.fullmatch(commit_id):
        raise ValueError(f"bad commit_id {commit_id!r}")
    if not author_id:
        raise ValueError("empty author_id")
    if not _SIZE_RE.fullmatch(size):
        raise ValueError(f"bad size_words {size!r}")
    if is_merge not in ("true", "false"):
        raise ValueError(f"bad is_merge {is_merge!r}")
    return RawCommit(
        commit_id=commit_id,
        author_id=author_id,
        author_timestamp=parse_timestamp(stamp),
        size_words=int(size),
        is_merge=is_merge == "true",
    )


def load_commit_csv(path: str | Path) -> CsvLoad:
    """Parse a commit CSV, dropping (and counting) rows that fail validation."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise MalformedHeader(f"{path}: expected header {','.join(CSV_HEADER)}, got {header}")
        load = CsvLoad(records=[])
        seen: set[str] = set()
        for lineno, row in enumerate(reader, start=2):
            try:
                record = _parse_row(row)
                if record.commit_id in seen:
                    raise ValueError(f"duplicate commit_id {record.commit_id}")
            except ValueError as exc:
                logger.debug("%s:%d dropped: %s", path, lineno, exc)
                load.dropped += 1
                continue
            seen.add(record.commit_id)
            load.records.append(record)
    if load.dropped:
        logger.warning("%s: dropped %d invalid row(s)", path, load.dropped)
    return load


def read_commit_csv(path: str | Path) -> list[RawCommit]:
    return load_commit_csv(path).records


def write_commit_csv(records: Iterable[RawCommit], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow(
                [r.commit_id, r.author_id, format_timestamp(r.author_timestamp), r.size_words, "true" if r.is_merge else "false"]
            )
