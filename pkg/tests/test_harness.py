import dataclasses
import json

import pytest

from probilp.harness import (
    SweepGrid,
    TaskError,
    eval_program,
    format_sweep_table,
    load_bundle,
    load_task,
    run_eval,
    run_learn,
    run_sweep,
    save_bundle,
    task_from_bundle,
)
from probilp.parsing import parse_program, print_program
from probilp.search import SearchSettings
from probilp.synth import SceneConfig, synth_generate

NOISELESS = SceneConfig(
    bias_body_preds=(("has_object", 2), ("vehicle", 1), ("bridge", 1), ("is_on", 2)),
    tp_confidence=(1.0, 0.0),
    false_detection_rate=0.0,
    miss_rate=0.0,
    label_flip_rate=0.0,
    seed=13,
)

BINARY = SearchSettings(tester="binary", constrainer="combo", cost="mdl", budget_seconds=60)


@pytest.fixture()
def task_dir(tmp_path):
    bundle = synth_generate(NOISELESS, 4, 4)
    d = tmp_path / "task"
    save_bundle(bundle, d)
    return d


class TestBundleIO:
    def test_save_load_round_trip(self, task_dir):
        bundle = load_bundle(task_dir)
        reloaded_dir = task_dir.parent / "again"
        save_bundle(bundle, reloaded_dir)
        assert load_bundle(reloaded_dir) == bundle

    def test_missing_facts_file_raises(self, task_dir):
        (task_dir / "facts" / "img0001").unlink()
        with pytest.raises(TaskError):
            load_task(task_dir)

    def test_missing_bias_raises(self, task_dir):
        (task_dir / "bias.pl").unlink()
        with pytest.raises(TaskError):
            load_task(task_dir)


class TestRunLearn:
    def test_valid_task_exits_zero_and_writes_result(self, task_dir, tmp_path):
        out = tmp_path / "result.json"
        assert run_learn(task_dir, BINARY, out) == 0
        record = json.loads(out.read_text())
        assert record["program"].startswith("f(A) :-")
        assert record["metrics"]["fp"] == 0 and record["metrics"]["fn"] == 0
        assert "wall" not in json.dumps(record)

    def test_missing_facts_file_exits_two(self, task_dir, tmp_path):
        (task_dir / "facts" / "img0001").unlink()
        assert run_learn(task_dir, BINARY, tmp_path / "r.json") == 2

    def test_malformed_bias_exits_two(self, task_dir, tmp_path):
        (task_dir / "bias.pl").write_text("head_pred(f,1)")  # missing final dot
        assert run_learn(task_dir, BINARY, tmp_path / "r.json") == 2

    def test_zero_budget_exits_one(self, task_dir, tmp_path):
        settings = dataclasses.replace(BINARY, max_iterations=0)
        out = tmp_path / "r.json"
        assert run_learn(task_dir, settings, out) == 1
        assert json.loads(out.read_text())["program"] is None

    def test_result_files_are_byte_identical_across_runs(self, task_dir, tmp_path):
        out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
        assert run_learn(task_dir, BINARY, out1) == 0
        assert run_learn(task_dir, BINARY, out2) == 0
        assert out1.read_bytes() == out2.read_bytes()


class TestRunEval:
    def test_target_program_scores_perfectly(self, task_dir, tmp_path):
        program_file = tmp_path / "prog.pl"
        program_file.write_text(NOISELESS.target + "\n")
        metrics = run_eval(program_file, task_dir, BINARY)
        assert metrics["f1"] == 1.0
        assert metrics["n_examples"] == 8

    def test_undeclared_predicates_evaluate_to_zero_coverage(self, task_dir, tmp_path):
        program_file = tmp_path / "prog.pl"
        program_file.write_text("f(A) :- has_object(A,B), spaceship(B).\n")
        metrics = run_eval(program_file, task_dir, BINARY)
        assert metrics["tp"] == 0 and metrics["fp"] == 0

    def test_empty_example_set_rejected(self):
        task = task_from_bundle(synth_generate(NOISELESS, 1, 1))
        empty = dataclasses.replace(task, examples=())
        with pytest.raises(TaskError):
            eval_program(parse_program(NOISELESS.target), empty, BINARY)

    def test_explicit_threshold_is_used(self, task_dir, tmp_path):
        program_file = tmp_path / "prog.pl"
        program_file.write_text(NOISELESS.target + "\n")
        metrics = run_eval(program_file, task_dir, BINARY, threshold=0.25)
        assert metrics["threshold"] == 0.25


class TestTesterEquivalence:
    def test_zero_noise_binary_and_probabilistic_testers_agree(self, task_dir):
        # with binary confidences both pipelines reduce to classical search
        task = load_task(task_dir)
        binary = learn_with(task, tester="binary")
        probabilistic = learn_with(task, tester="neurosymbolic")
        b, p = binary.best_result, probabilistic.best_result
        assert (b.tp, b.fp, b.tn, b.fn) == (p.tp, p.fp, p.tn, p.fn)
        assert print_program(binary.best_program) == print_program(probabilistic.best_program)


def learn_with(task, tester):
    from probilp.search import learn

    settings = SearchSettings(
        tester=tester, constrainer="combo", cost="mdl", budget_seconds=60
    )
    return learn(task, settings)


class TestRunSweep:
    def test_single_cell_report(self):
        grid = SweepGrid(
            tiers=("easy",),
            train_sizes=(2,),
            models=("binary-combo-mdl",),
            repetitions=1,
            n_test=4,
            seed=1,
            scene=NOISELESS,
        )
        settings = dataclasses.replace(BINARY, budget_seconds=30.0)
        report = run_sweep(grid, settings, max_workers=1)
        assert len(report["cells"]) == 1
        cell = report["cells"][0]
        assert len(cell["reps"]) == 1
        assert 0.0 <= cell["mean_f1"] <= 1.0
        table = format_sweep_table(report)
        assert "binary-combo-mdl" in table

    def test_repetitions_use_distinct_seeds(self):
        grid = SweepGrid(
            tiers=("easy",),
            train_sizes=(1,),
            models=("binary-combo-mdl",),
            repetitions=3,
            n_test=2,
            seed=2,
            scene=NOISELESS,
        )
        report = run_sweep(grid, dataclasses.replace(BINARY, budget_seconds=20.0), max_workers=2)
        seeds = [rep["seed"] for rep in report["cells"][0]["reps"]]
        assert len(set(seeds)) == 3

    def test_unknown_model_rejected(self):
        grid = SweepGrid(models=("nonexistent",))
        with pytest.raises(ValueError):
            run_sweep(grid, BINARY)
