import os
import subprocess
from pathlib import Path

import pytest

FIXTURES = Path(__file__).parent / "fixtures"

_acceptance_results = []


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("acceptance")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    passed = call.excinfo is None
    _acceptance_results.append((number, title, passed, item.name))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, name in sorted(_acceptance_results):
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {title} ({name})")


def git(repo, *args, env=None):
    return subprocess.run(["git", "-C", str(repo), *args], check=True, capture_output=True, env=env).stdout


@pytest.fixture(scope="session")
def fixture_repo(tmp_path_factory):
    """Clone of the committed synthetic fixture repository."""
    dest = tmp_path_factory.mktemp("fixture") / "repo"
    subprocess.run(["git", "clone", "-q", str(FIXTURES / "fixture_repo.bundle"), str(dest)], check=True)
    return dest


@pytest.fixture(scope="session")
def fixture_labels(fixture_repo):
    """Commit subject (e.g. 'alice-07') -> commit id."""
    out = git(fixture_repo, "log", "--all", "--format=%H %s").decode()
    return {subject: sha for sha, subject in (line.split(" ", 1) for line in out.splitlines())}


@pytest.fixture
def repo_factory(tmp_path, monkeypatch):
    """Build small throwaway repositories commit by commit."""
    monkeypatch.setenv("GIT_CONFIG_GLOBAL", "/dev/null")
    monkeypatch.setenv("GIT_CONFIG_NOSYSTEM", "1")
    return RepoBuilder(tmp_path / "repo")


class RepoBuilder:
    def __init__(self, path: Path):
        self.path = path
        path.mkdir(parents=True)
        git(path, "init", "-q", "-b", "main")

    def write(self, name, content):
        target = self.path / name
        target.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(content, bytes):
            target.write_bytes(content)
        else:
            target.write_text(content, encoding="utf-8")

    def remove(self, name):
        (self.path / name).unlink()

    def commit(self, message, when, author="Dev", email="dev@example.com"):
        env = {
            **os.environ,
            "GIT_AUTHOR_NAME": author,
            "GIT_AUTHOR_EMAIL": email,
            "GIT_AUTHOR_DATE": when,
            "GIT_COMMITTER_NAME": author,
            "GIT_COMMITTER_EMAIL": email,
            "GIT_COMMITTER_DATE": when,
        }
        git(self.path, "add", "-A", env=env)
        git(self.path, "-c", "commit.gpgsign=false", "commit", "-q", "--allow-empty", "-m", message, env=env)
        return git(self.path, "rev-parse", "HEAD").decode().strip()

    def git(self, *args):
        return git(self.path, *args)

