"""Driver tests: exit codes, output tree, logging, dump flags."""

import re

from conftest import program_files
from sketchsynth import cli

STAGES = [
    "rewriting syntax sugar",
    "specializing class-level generator",
    "building class hierarchy",
    "encoding",
    "solving",
    "replacing holes",
    "replacing generators",
    "decoding",
    "synthesis done",
]


def run(tmp_path, *args):
    out = tmp_path / "result"
    code = cli.main([*args, "--out", str(out)])
    return code, out


def test_solved_run_writes_full_output_tree(tmp_path):
    code, out = run(tmp_path,
                    *program_files("Test.java", "SimpleMath.java"))
    assert code == cli.EXIT_SOLVED
    assert (out / "solution.txt").is_file()
    assert (out / "log" / "log.txt").is_file()
    java = sorted(p.name for p in (out / "java").iterdir())
    assert java == ["SimpleMath.java", "Test.java"]
    assert "return 2 * x;" in (out / "java" / "SimpleMath.java").read_text()


def test_solution_file_format(tmp_path):
    _, out = run(tmp_path, *program_files("Test.java", "SimpleMath.java"))
    lines = (out / "solution.txt").read_text().splitlines()
    assert lines[0] == "hole e_h1 = 2"
    assert lines[1] == "choice e_c1 = 0"
    assert re.fullmatch(r"stats candidates=\d+ depth=\d+ ms=\d+", lines[2])


def test_log_stages_in_order_with_timestamps(tmp_path):
    _, out = run(tmp_path, *program_files("Test.java", "SimpleMath.java"))
    log = (out / "log" / "log.txt").read_text().splitlines()
    staged = [l for l in log if re.match(r"\d\d:\d\d:\d\d ", l)]
    assert [l[9:] for l in staged] == STAGES
    assert "replaced: SimpleMath.e_h1 = 2" in log


def test_unsat_gives_exit_1_and_no_java_dir(tmp_path):
    code, out = run(tmp_path, *program_files(
        "DBConnection.java", "AutomatonTwoState.java", "TestDBConnection.java"))
    assert code == cli.EXIT_UNSAT
    assert not (out / "java").exists()
    assert not (out / "solution.txt").exists()


def test_stale_java_tree_removed_on_failing_rerun(tmp_path):
    _, out = run(tmp_path, *program_files("Test.java", "SimpleMath.java"))
    assert (out / "java").exists()
    code, _ = run(tmp_path, *program_files(
        "DBConnection.java", "AutomatonTwoState.java", "TestDBConnection.java"))
    assert code == cli.EXIT_UNSAT
    assert not (out / "java").exists()


def test_syntax_error_gives_exit_2_with_position(tmp_path, capsys):
    bad = tmp_path / "bad.java"
    bad.write_text("class A { int x = ; }")
    code, out = run(tmp_path, str(bad))
    assert code == cli.EXIT_INPUT
    err = capsys.readouterr().err
    assert "bad.java:1:" in err
    assert not (out / "java").exists()


def test_missing_type_gives_exit_2(tmp_path):
    bad = tmp_path / "bad.java"
    bad.write_text("class A extends Nothing { }")
    code, _ = run(tmp_path, str(bad))
    assert code == cli.EXIT_INPUT


def test_timeout_gives_exit_3(tmp_path):
    code, out = run(tmp_path, *program_files(
        "DBConnection.java", "Automaton.java", "TestDBConnection.java"),
        "--timeout", "0.01")
    assert code == cli.EXIT_TIMEOUT
    assert not (out / "java").exists()


def test_emit_flags_write_debug_dumps(tmp_path):
    _, out = run(tmp_path, *program_files("Test.java", "SimpleMath.java"),
                 "--emit-ir", "--emit-tables", "--emit-desugared")
    assert (out / "ir" / "ir.txt").is_file()
    assert (out / "tables" / "classes.txt").is_file()
    desugared = (out / "desugared" / "SimpleMath.java").read_text()
    # the desugared dump keeps the sketch constructs
    assert "??" in desugared and "{|" in desugared


def test_engine_flags_are_honored(tmp_path):
    # forcing a tiny unroll-max turns the depth-4 monitor into UNSAT
    code, _ = run(tmp_path, *program_files(
        "DBConnection.java", "Automaton.java", "TestDBConnection.java"),
        "--unroll-max", "2")
    assert code == cli.EXIT_UNSAT


def test_solution_is_byte_identical_across_reruns(tmp_path):
    texts = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        code = cli.main([*program_files("Test.java", "SimpleMath.java"),
                         "--out", str(out)])
        assert code == cli.EXIT_SOLVED
        texts.append((out / "solution.txt").read_bytes())
    assert texts[0] == texts[1]
