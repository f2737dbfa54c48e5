import pytest

from codeatlas.errors import IoFailure, NoAdapter
from codeatlas.extract import RepoSpec, get_adapter, scan_repository


def make_repo(tmp_path, files):
    for rel, content in files.items():
        path = tmp_path / rel
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content)
    return tmp_path


def test_scan_honors_exclude_globs(tmp_path):
    root = make_repo(tmp_path, {
        "src/A.java": "class A {}",
        "src/test/ATest.java": "class ATest {}",
        "src/B.java": "class B {}",
    })
    spec = RepoSpec(name="r", root=root, language="java", exclude=["**/test/**"])
    result = scan_repository(spec, get_adapter("java"))
    assert result.files == ["src/A.java", "src/B.java"]


def test_scan_include_globs(tmp_path):
    root = make_repo(tmp_path, {
        "main/A.java": "class A {}",
        "other/B.java": "class B {}",
    })
    spec = RepoSpec(name="r", root=root, language="java", include=["main/*"])
    result = scan_repository(spec, get_adapter("java"))
    assert result.files == ["main/A.java"]


def test_scan_empty_directory(tmp_path):
    spec = RepoSpec(name="r", root=tmp_path, language="java")
    assert scan_repository(spec, get_adapter("java")).files == []


def test_scan_only_unmatched_extensions(tmp_path):
    make_repo(tmp_path, {"readme.md": "hello", "notes.txt": "x"})
    spec = RepoSpec(name="r", root=tmp_path, language="java")
    assert scan_repository(spec, get_adapter("java")).files == []


def test_scan_size_cap(tmp_path):
    make_repo(tmp_path, {"Big.java": "x" * 2048, "Small.java": "class S {}"})
    spec = RepoSpec(name="r", root=tmp_path, language="java")
    result = scan_repository(spec, get_adapter("java"), max_bytes=1024)
    assert result.files == ["Small.java"]
    assert result.skipped_large == ["Big.java"]
    assert result.diagnostics


def test_scan_missing_root(tmp_path):
    spec = RepoSpec(name="r", root=tmp_path / "nope", language="java")
    with pytest.raises(IoFailure):
        scan_repository(spec, get_adapter("java"))


def test_unknown_adapter():
    with pytest.raises(NoAdapter):
        get_adapter("cobol")


def test_facts_adapter_claims_only_facts_json(tmp_path):
    make_repo(tmp_path, {"facts.json": "{}", "other.json": "{}"})
    spec = RepoSpec(name="r", root=tmp_path, language="facts")
    result = scan_repository(spec, get_adapter("facts"))
    assert result.files == ["facts.json"]
