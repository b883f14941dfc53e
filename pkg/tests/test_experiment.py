import json

import pytest

from utterancesmith.datasets import second_generator_spec, write_synthetic_dataset
from utterancesmith.errors import DatasetTooSmall, IncompleteGrid
from utterancesmith.experiment import (
    ExperimentConfig,
    ResultGrid,
    report_table,
    run_grid,
)
from utterancesmith.generation import GeneratorSpec, run_ensemble


@pytest.fixture(scope="module")
def dataset_paths(tmp_path_factory):
    out = tmp_path_factory.mktemp("ds")
    return write_synthetic_dataset(out, seed=0)


def small_config(dataset_paths, **overrides):
    csv_path, split_path = dataset_paths
    defaults = dict(
        dataset=str(csv_path),
        split=str(split_path),
        n_values=(2,),
        input_types=("diverse", "narrow"),
        pipeline_configs=("base",),
        seeds=(1,),
    )
    defaults.update(overrides)
    return ExperimentConfig(**defaults)


class TestConfig:
    def test_round_trip_via_json(self, dataset_paths):
        config = small_config(dataset_paths, generators=(GeneratorSpec(id="g"),))
        restored = ExperimentConfig.from_dict(json.loads(json.dumps(config.to_dict())))
        assert restored == config

    def test_validation(self, dataset_paths):
        with pytest.raises(ValueError):
            small_config(dataset_paths, n_values=())
        with pytest.raises(ValueError):
            small_config(dataset_paths, seeds=())
        with pytest.raises(ValueError):
            small_config(dataset_paths, input_types=("sideways",))
        with pytest.raises(ValueError):
            small_config(dataset_paths, pipeline_configs=("turbo",))


class TestRunGrid:
    def test_cell_counting(self, dataset_paths):
        grid = run_grid(small_config(dataset_paths))
        assert len(grid.cells) == 2  # 2 input types x 1 pipeline x 1 n x 1 seed
        assert all(0.0 <= acc <= 1.0 for acc in grid.cells.values())

    def test_base_never_invokes_generators(self, dataset_paths):
        calls = {"n": 0}

        def counting_runner(seeds, generators, **kwargs):
            calls["n"] += 1
            return run_ensemble(seeds, generators, **kwargs)

        run_grid(small_config(dataset_paths), ensemble_runner=counting_runner)
        assert calls["n"] == 0

        run_grid(
            small_config(dataset_paths, pipeline_configs=("base", "generate_select"),
                         input_types=("diverse",)),
            ensemble_runner=counting_runner,
        )
        assert calls["n"] > 0

    def test_augmented_training_size_bounded(self, dataset_paths, monkeypatch):
        """Each non-base cell trains every intent on n + |selected| <= n + 5n."""
        import utterancesmith.experiment as experiment_module

        captured = []
        real_train = experiment_module.train

        def capturing_train(dataset):
            captured.append(dataset)
            return real_train(dataset)

        monkeypatch.setattr(experiment_module, "train", capturing_train)
        n = 2
        config = small_config(
            dataset_paths, pipeline_configs=("generate_select",), input_types=("diverse",),
            n_values=(n,),
        )
        grid = run_grid(config)
        assert grid.cells and captured
        target = config.selection.target_size
        for dataset in captured:
            for intent, texts in dataset.texts_by_intent().items():
                assert n <= len(texts) <= n + target * n, (intent, len(texts))

    def test_reproducible_byte_identical(self, dataset_paths):
        config = small_config(
            dataset_paths,
            pipeline_configs=("base", "generate_select"),
            input_types=("diverse", "random"),
            seeds=(3, 4),
        )
        first = run_grid(config).to_json()
        second = run_grid(config).to_json()
        assert first == second

    def test_dataset_too_small(self, dataset_paths):
        with pytest.raises(DatasetTooSmall):
            run_grid(small_config(dataset_paths, n_values=(500,)))

    def test_ensemble_pipeline_uses_all_generators(self, dataset_paths):
        used = []

        def recording_runner(seeds, generators, **kwargs):
            used.append(tuple(g.id for g in generators))
            return run_ensemble(seeds, generators, **kwargs)

        config = small_config(
            dataset_paths,
            pipeline_configs=("generate_select", "ensemble_select"),
            input_types=("diverse",),
            generators=(GeneratorSpec(id="one"), second_generator_spec("two")),
        )
        run_grid(config, ensemble_runner=recording_runner)
        assert ("one",) in used
        assert ("one", "two") in used


class TestResultGrid:
    def test_json_round_trip(self, dataset_paths):
        grid = run_grid(small_config(dataset_paths))
        restored = ResultGrid.from_json_dict(json.loads(grid.to_json()))
        assert restored.cells == grid.cells

    def test_aggregates(self):
        grid = ResultGrid(
            cells={
                ("diverse", "base", 2, 1): 0.5,
                ("diverse", "base", 2, 2): 0.7,
            }
        )
        stats = grid.aggregates()[("diverse", "base", 2)]
        assert stats["mean"] == pytest.approx(0.6)
        assert stats["stddev"] == pytest.approx(0.1)
        assert stats["n_seeds"] == 2

    def test_mean_accuracy_missing_cell(self):
        grid = ResultGrid(cells={("diverse", "base", 2, 1): 0.5})
        with pytest.raises(IncompleteGrid):
            grid.mean_accuracy("narrow", "base", 2)


class TestReportTable:
    def make_grid(self, input_types, pipelines, n_values):
        cells = {}
        for t in input_types:
            for p in pipelines:
                for n in n_values:
                    for seed in (1, 2):
                        cells[(t, p, n, seed)] = 0.5
        return ResultGrid(cells=cells)

    def test_input_quality_layout(self):
        grid = self.make_grid(
            ("diverse", "random", "narrow"), ("generate_select",), (1, 2, 4, 8)
        )
        report = report_table(grid, "table1")
        assert report.text.count("\n") == 5  # title + header + 3 rows + trailing
        lines = report.csv.strip().splitlines()
        assert lines[0] == "input_type,n=1,n=2,n=4,n=8"
        assert len(lines) == 4

    def test_pipeline_ablation_layout(self):
        grid = self.make_grid(
            ("diverse",),
            ("base", "generate_only", "generate_select", "ensemble_select"),
            (1, 2, 4, 8),
        )
        report = report_table(grid, "table3")
        lines = report.csv.strip().splitlines()
        assert lines[0] == "pipeline,n=1,n=2,n=4,n=8"
        assert len(lines) == 5

    def test_missing_cell_named(self):
        grid = self.make_grid(("diverse", "random"), ("generate_select",), (1,))
        with pytest.raises(IncompleteGrid) as err:
            report_table(grid, "table1")
        assert "narrow" in str(err.value)

    def test_unknown_layout(self):
        grid = self.make_grid(("diverse",), ("base",), (1,))
        with pytest.raises(ValueError):
            report_table(grid, "table9")
