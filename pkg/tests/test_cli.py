import json

import pytest

from conftest import DATA_DIR
from fosgraph.cli import aliases_path_for, main
from fosgraph.graph import VENUE_VENUE, MultilayerGraph, NodeKind
from fosgraph.synth import CorpusSpec, generate_corpus
from fosgraph.taxonomy import load_taxonomy

TAX = str(DATA_DIR / "taxonomy.tsv")


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("corpus")
    spec = CorpusSpec(n_venues=60, n_records=400, n_fields=6, rng_seed=3)
    return generate_corpus(out, load_taxonomy(TAX), spec)


@pytest.fixture(scope="module")
def pipeline(tmp_path_factory, corpus):
    """Run build -> propagate -> classify -> evaluate once; return all paths."""
    work = tmp_path_factory.mktemp("pipeline")
    paths = {
        "graph": work / "graph.tsv",
        "stats": work / "stats.txt",
        "table": work / "table.tsv",
        "coverage": work / "coverage.txt",
        "results": work / "results.jsonl",
        "metrics": work / "metrics.txt",
    }
    assert main([
        "build", "--records", str(corpus.records_path), "--taxonomy", TAX,
        "--seeds", str(corpus.seeds_path), "--graph", str(paths["graph"]),
        "--out", str(paths["stats"]),
    ]) == 0
    assert main([
        "propagate", "--graph", str(paths["graph"]), "--taxonomy", TAX,
        "--table", str(paths["table"]), "--out", str(paths["coverage"]),
    ]) == 0
    assert main([
        "classify", "--graph", str(paths["graph"]), "--table", str(paths["table"]),
        "--taxonomy", TAX, "--records", str(corpus.records_path),
        "--out", str(paths["results"]), "--strategy", "ref", "--top-t", "2",
    ]) == 0
    assert main([
        "evaluate", "--results", str(paths["results"]), "--gold", str(corpus.gold_path),
        "--top-t", "1", "--out", str(paths["metrics"]),
    ]) == 0
    return paths


class TestBuild:
    def test_graph_and_aliases_written(self, pipeline, corpus):
        graph = MultilayerGraph.load(pipeline["graph"])
        assert graph.node_count(NodeKind.VENUE) == len(corpus.venue_keys)
        assert graph.node_count(NodeKind.FOS) == 222
        assert graph.edge_count(VENUE_VENUE) > 0
        assert aliases_path_for(pipeline["graph"]).is_file()

    def test_stats_report_contents(self, pipeline):
        stats = dict(
            line.split("\t") for line in pipeline["stats"].read_text().splitlines()
        )
        assert stats["records_read"] == "400"
        assert int(stats["edges_after_threshold"]) <= int(stats["raw_edge_count"])

    def test_missing_seed_file_exits_3(self, corpus, tmp_path, capsys):
        rc = main([
            "build", "--records", str(corpus.records_path), "--taxonomy", TAX,
            "--seeds", str(tmp_path / "nope.tsv"), "--graph", str(tmp_path / "g.tsv"),
        ])
        assert rc == 3
        assert "seed file not found" in capsys.readouterr().err

    def test_threshold_zero_keeps_all_counted_edges(self, corpus, tmp_path):
        rc = main([
            "build", "--records", str(corpus.records_path), "--taxonomy", TAX,
            "--seeds", str(corpus.seeds_path), "--graph", str(tmp_path / "g.tsv"),
            "--threshold", "0", "--out", str(tmp_path / "stats.txt"),
        ])
        assert rc == 0
        stats = dict(
            line.split("\t") for line in (tmp_path / "stats.txt").read_text().splitlines()
        )
        assert stats["edges_after_threshold"] == stats["raw_edge_count"]

    def test_byte_identical_rebuild(self, corpus, pipeline, tmp_path):
        rc = main([
            "build", "--records", str(corpus.records_path), "--taxonomy", TAX,
            "--seeds", str(corpus.seeds_path), "--graph", str(tmp_path / "g2.tsv"),
            "--out", str(tmp_path / "stats2.txt"),
        ])
        assert rc == 0
        assert (tmp_path / "g2.tsv").read_bytes() == pipeline["graph"].read_bytes()
        assert aliases_path_for(tmp_path / "g2.tsv").read_bytes() == \
            aliases_path_for(pipeline["graph"]).read_bytes()


class TestPropagate:
    def test_coverage_report_shape(self, pipeline):
        text = pipeline["coverage"].read_text()
        assert text.startswith("venues_total\t60")
        rows = {
            parts[0]: parts for parts in
            (line.split("\t") for line in text.splitlines()[1:])
        }
        for level in ("level_1", "level_2", "level_3"):
            pre, post = int(rows[level][2]), int(rows[level][4])
            assert post >= pre

    def test_rounds_zero_is_usage_error(self, pipeline, capsys):
        rc = main([
            "propagate", "--graph", str(pipeline["graph"]), "--taxonomy", TAX,
            "--table", "unused.tsv", "--rounds", "0",
        ])
        assert rc == 1
        assert "rounds" in capsys.readouterr().err

    def test_second_round_covers_at_least_as_much(self, pipeline, tmp_path):
        coverage = {}
        for rounds in (1, 2):
            out = tmp_path / f"cov{rounds}.txt"
            assert main([
                "propagate", "--graph", str(pipeline["graph"]), "--taxonomy", TAX,
                "--table", str(tmp_path / f"t{rounds}.tsv"), "--out", str(out),
                "--rounds", str(rounds),
            ]) == 0
            row = [l for l in out.read_text().splitlines() if l.startswith("level_3")][0]
            coverage[rounds] = int(row.split("\t")[4])
        assert coverage[2] >= coverage[1]

    def test_table_is_deterministic(self, pipeline, tmp_path):
        rc = main([
            "propagate", "--graph", str(pipeline["graph"]), "--taxonomy", TAX,
            "--table", str(tmp_path / "t2.tsv"), "--out", str(tmp_path / "c2.txt"),
        ])
        assert rc == 0
        assert (tmp_path / "t2.tsv").read_bytes() == pipeline["table"].read_bytes()

    def test_graph_without_seeds_is_data_error(self, mini_taxonomy, tmp_path, capsys):
        from conftest import make_venue_graph

        g = make_venue_graph({("qa", "qb"): 12.0})
        g.normalize_outgoing(VENUE_VENUE, "sum")
        g.save(tmp_path / "bare.tsv")
        tax_path = tmp_path / "tax.tsv"
        tax_path.write_text("h1\tH1\t1\t\n")
        rc = main([
            "propagate", "--graph", str(tmp_path / "bare.tsv"), "--taxonomy", str(tax_path),
            "--table", str(tmp_path / "t.tsv"),
        ])
        assert rc == 2
        assert "seed" in capsys.readouterr().err


class TestClassify:
    def test_one_result_line_per_record(self, pipeline, corpus):
        lines = pipeline["results"].read_text().splitlines()
        assert len(lines) == corpus.n_records
        first = json.loads(lines[0])
        assert set(first) == {"id", "strategy", "level", "status", "labels", "unmatched_venues"}
        assert len(first["labels"]) <= 2

    def test_results_are_deterministic(self, pipeline, corpus, tmp_path):
        rc = main([
            "classify", "--graph", str(pipeline["graph"]), "--table", str(pipeline["table"]),
            "--taxonomy", TAX, "--records", str(corpus.records_path),
            "--out", str(tmp_path / "r2.jsonl"), "--strategy", "ref", "--top-t", "2",
        ])
        assert rc == 0
        assert (tmp_path / "r2.jsonl").read_bytes() == pipeline["results"].read_bytes()

    def test_citref_without_citations_matches_ref(self, pipeline, corpus, tmp_path):
        # strip the citations out of the corpus, then citref == ref
        stripped = tmp_path / "nocit.jsonl"
        with open(corpus.records_path) as src, open(stripped, "w") as dst:
            for line in src:
                obj = json.loads(line)
                obj["citations"] = []
                dst.write(json.dumps(obj) + "\n")
        outputs = {}
        for strategy in ("ref", "citref"):
            out = tmp_path / f"{strategy}.jsonl"
            rc = main([
                "classify", "--graph", str(pipeline["graph"]), "--table", str(pipeline["table"]),
                "--taxonomy", TAX, "--records", str(stripped),
                "--out", str(out), "--strategy", strategy,
            ])
            assert rc == 0
            outputs[strategy] = out.read_text().replace('"strategy": "citref"', '"strategy": "ref"')
        assert outputs["ref"] == outputs["citref"]

    def test_single_mode_via_flags(self, pipeline, corpus, capsys):
        hub = corpus.hub_keys[0]
        rc = main([
            "classify", "--graph", str(pipeline["graph"]), "--table", str(pipeline["table"]),
            "--taxonomy", TAX, "--id", "10.5555/by-hand",
            "--ref", hub, "--ref", hub, "--strategy", "ref",
        ])
        assert rc == 0
        result = json.loads(capsys.readouterr().out)
        assert result["id"] == "10.5555/by-hand"
        assert result["status"] == "ok"
        assert result["labels"][0]["fos"] == corpus.venue_fields[hub]

    def test_single_mode_and_records_conflict(self, pipeline, corpus, capsys):
        rc = main([
            "classify", "--graph", str(pipeline["graph"]), "--table", str(pipeline["table"]),
            "--taxonomy", TAX, "--records", str(corpus.records_path),
            "--id", "x", "--ref", "somewhere",
        ])
        assert rc == 1

    def test_neither_records_nor_single_flags(self, pipeline, capsys):
        rc = main([
            "classify", "--graph", str(pipeline["graph"]), "--table", str(pipeline["table"]),
            "--taxonomy", TAX,
        ])
        assert rc == 1

    def test_unknown_strategy_is_usage_error(self, pipeline, corpus, capsys):
        rc = main([
            "classify", "--graph", str(pipeline["graph"]), "--table", str(pipeline["table"]),
            "--taxonomy", TAX, "--records", str(corpus.records_path),
            "--out", "unused.jsonl", "--strategy", "telepathy",
        ])
        assert rc == 1

    def test_top_t_and_min_score_together_rejected(self, pipeline, corpus, capsys):
        rc = main([
            "classify", "--graph", str(pipeline["graph"]), "--table", str(pipeline["table"]),
            "--taxonomy", TAX, "--records", str(corpus.records_path),
            "--out", "unused.jsonl", "--top-t", "2", "--min-score", "0.1",
        ])
        assert rc == 1


class TestEvaluate:
    def test_metrics_written(self, pipeline):
        text = pipeline["metrics"].read_text()
        assert "macro_f1\t" in text and "micro_f1\t" in text and "weighted_macro_f1\t" in text

    def test_gold_validation_against_taxonomy(self, pipeline, tmp_path, capsys):
        bad_gold = tmp_path / "gold.tsv"
        bad_gold.write_text("10.5555/synth.0000000\tastrology\n")
        rc = main([
            "evaluate", "--results", str(pipeline["results"]), "--gold", str(bad_gold),
            "--taxonomy", TAX,
        ])
        assert rc == 2

    def test_top2_at_least_top1(self, pipeline, corpus, tmp_path):
        scores = {}
        for k in (1, 2):
            out = tmp_path / f"m{k}.txt"
            assert main([
                "evaluate", "--results", str(pipeline["results"]),
                "--gold", str(corpus.gold_path), "--top-t", str(k), "--out", str(out),
            ]) == 0
            rows = dict(
                line.split("\t") for line in out.read_text().splitlines()
                if line.startswith(("macro_f1", "micro_f1", "weighted"))
            )
            scores[k] = float(rows["micro_f1"])
        assert scores[2] >= scores[1]


class TestStats:
    def test_stats_output(self, pipeline, capsys):
        rc = main(["stats", "--graph", str(pipeline["graph"]), "--table", str(pipeline["table"])])
        assert rc == 0
        out = capsys.readouterr().out
        assert "nodes_venue\t60" in out
        assert "edges_L3\t" in out
        assert "labeled_venues_level_3\t" in out

    def test_corrupt_graph_is_data_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.tsv"
        bad.write_text("fos-graph v1\nN\tzero\tvenue\tx\n")
        assert main(["stats", "--graph", str(bad)]) == 2


class TestHelp:
    def test_subcommands_listed(self, capsys):
        assert main(["--help"]) == 0
        out = capsys.readouterr().out
        for sub in ("build", "propagate", "classify", "evaluate", "stats"):
            assert sub in out

    @pytest.mark.parametrize(
        "command,expectations",
        [
            ("build", ["--records", "--taxonomy", "--seeds", "--graph", "--out",
                       "--threshold", "default: 10", "--window", "--norm-mode",
                       "default: sum", "--workers"]),
            ("propagate", ["--graph", "--taxonomy", "--table", "--rounds", "default: 2",
                           "--keep-top", "default: 5", "--min-fos-weight", "default: 1e-4"]),
            ("classify", ["--strategy", "default: ref", "--level", "default: 3",
                          "--top-t", "default: 1", "--min-score", "--id",
                          "--published", "--ref", "--cite"]),
            ("evaluate", ["--results", "--gold", "--top-t", "default: 1"]),
            ("stats", ["--graph", "--table"]),
        ],
    )
    def test_flags_and_defaults_in_help(self, command, expectations, capsys):
        assert main([command, "--help"]) == 0
        out = capsys.readouterr().out
        for needle in expectations:
            assert needle in out, f"{command} --help missing {needle!r}"

    def test_missing_subcommand_is_usage_error(self, capsys):
        assert main([]) == 1
