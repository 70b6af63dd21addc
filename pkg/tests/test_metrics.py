import random

import pytest

from fosgraph.classify import ClassificationResult, FosScore
from fosgraph.errors import ConfigError, DataError
from fosgraph.metrics import GoldLabel, evaluate, load_gold, report_text, write_report


def _result(pub_id, ranked_fos):
    n = len(ranked_fos)
    labels = [FosScore(f, (n - i) / n) for i, f in enumerate(ranked_fos)]
    status = "ok" if labels else "unclassifiable"
    return ClassificationResult(pub_id, "ref", 3, labels, status=status)


def _dataset(pairs):
    """pairs: (gold fos, ranked prediction list) per publication."""
    results, gold = [], []
    for i, (gold_fos, ranked) in enumerate(pairs):
        results.append(_result(f"p{i}", ranked))
        gold.append(GoldLabel(f"p{i}", gold_fos))
    return results, gold


class TestEvaluate:
    def test_all_correct_gives_ones(self):
        results, gold = _dataset([("a", ["a"]), ("b", ["b"]), ("a", ["a"])])
        report = evaluate(results, gold, k=1)
        assert report.macro_f1 == report.micro_f1 == report.weighted_macro_f1 == 1.0

    def test_topk_credits_gold_anywhere_in_top_k(self):
        results, gold = _dataset([("f1", ["f2", "f1"])])
        top1 = evaluate(results, gold, k=1)
        top2 = evaluate(results, gold, k=2)
        assert top1.micro_f1 == 0.0
        assert top2.micro_f1 == 1.0

    def test_hand_computed_confusion_fixture(self):
        # gold a: predictions a,a,b; gold b: b,b; gold c: a,c
        pairs = [
            ("a", ["a"]), ("a", ["a"]), ("a", ["b"]),
            ("b", ["b"]), ("b", ["b"]),
            ("c", ["a"]), ("c", ["c"]),
        ]
        results, gold = _dataset(pairs)
        report = evaluate(results, gold, k=1)
        # per-class F1: a=2/3, b=4/5, c=2/3 (worked out from the confusion counts)
        assert abs(report.per_class["a"].f1 - 2 / 3) < 1e-9
        assert abs(report.per_class["b"].f1 - 4 / 5) < 1e-9
        assert abs(report.per_class["c"].f1 - 2 / 3) < 1e-9
        assert abs(report.macro_f1 - 32 / 45) < 1e-9
        assert abs(report.micro_f1 - 5 / 7) < 1e-9
        assert abs(report.weighted_macro_f1 - 74 / 105) < 1e-9

    def test_agrees_with_sklearn(self):
        from sklearn.metrics import f1_score

        rng = random.Random(9)
        classes = ["a", "b", "c", "d"]
        pairs = [(rng.choice(classes), [rng.choice(classes)]) for _ in range(300)]
        results, gold = _dataset(pairs)
        report = evaluate(results, gold, k=1)
        y_true = [g for g, _ in pairs]
        y_pred = [p[0] for _, p in pairs]
        labels = sorted(set(y_true) | set(y_pred))
        assert abs(report.macro_f1 - f1_score(y_true, y_pred, labels=labels, average="macro")) < 1e-9
        assert abs(report.micro_f1 - f1_score(y_true, y_pred, labels=labels, average="micro")) < 1e-9
        assert (
            abs(report.weighted_macro_f1 - f1_score(y_true, y_pred, labels=labels, average="weighted"))
            < 1e-9
        )

    def test_weighted_macro_definition_holds(self):
        rng = random.Random(13)
        classes = ["w", "x", "y"]
        pairs = [(rng.choice(classes), [rng.choice(classes)]) for _ in range(100)]
        results, gold = _dataset(pairs)
        report = evaluate(results, gold, k=1)
        recomputed = sum(
            m.support / report.total * m.f1 for m in report.per_class.values()
        )
        assert abs(report.weighted_macro_f1 - recomputed) < 1e-9

    def test_micro_equals_accuracy_when_everything_predicted(self):
        rng = random.Random(3)
        classes = ["a", "b", "c"]
        pairs = [(rng.choice(classes), [rng.choice(classes)]) for _ in range(200)]
        results, gold = _dataset(pairs)
        report = evaluate(results, gold, k=1)
        accuracy = sum(1 for g, p in pairs if g == p[0]) / len(pairs)
        assert abs(report.micro_f1 - accuracy) < 1e-9

    def test_unclassifiable_counts_as_false_negative_only(self):
        results, gold = _dataset([("a", []), ("a", ["a"])])
        report = evaluate(results, gold, k=1)
        m = report.per_class["a"]
        assert m.support == 2 and m.predicted == 1
        assert m.precision == 1.0
        assert abs(m.recall - 0.5) < 1e-9

    def test_prediction_only_class_gets_support_zero_row(self):
        results, gold = _dataset([("a", ["z"]), ("a", ["a"])])
        report = evaluate(results, gold, k=1)
        assert report.per_class["z"].support == 0
        assert report.per_class["z"].predicted == 1
        assert report.per_class["z"].f1 == 0.0
        # macro averages both rows
        assert abs(report.macro_f1 - (report.per_class["a"].f1 + 0.0) / 2) < 1e-9

    def test_top2_micro_never_below_top1(self):
        rng = random.Random(21)
        classes = [f"c{i}" for i in range(6)]
        for _ in range(50):
            pairs = []
            for _ in range(40):
                ranked = rng.sample(classes, k=3)
                pairs.append((rng.choice(classes), ranked))
            results, gold = _dataset(pairs)
            top1 = evaluate(results, gold, k=1).micro_f1
            top2 = evaluate(results, gold, k=2).micro_f1
            assert top2 >= top1

    def test_random_gold_micro_near_chance(self):
        rng = random.Random(4)
        classes = ["a", "b", "c", "d"]
        pairs = [(rng.choice(classes), [rng.choice(classes)]) for _ in range(10000)]
        results, gold = _dataset(pairs)
        report = evaluate(results, gold, k=1)
        assert abs(report.micro_f1 - 0.25) < 0.1

    def test_duplicate_gold_rejected(self):
        results, _ = _dataset([("a", ["a"])])
        gold = [GoldLabel("p0", "a"), GoldLabel("p0", "b")]
        with pytest.raises(DataError):
            evaluate(results, gold, k=1)

    def test_missing_result_rejected(self):
        with pytest.raises(DataError):
            evaluate([], [GoldLabel("p0", "a")], k=1)

    def test_bad_k_rejected(self):
        results, gold = _dataset([("a", ["a"])])
        with pytest.raises(ConfigError):
            evaluate(results, gold, k=0)


class TestReport:
    def _report(self):
        results, gold = _dataset([("a", ["a"]), ("b", ["a"]), ("b", ["b"])])
        return evaluate(results, gold, k=1)

    def test_byte_identical_across_writes(self, tmp_path):
        report = self._report()
        p1, p2 = tmp_path / "m1.tsv", tmp_path / "m2.tsv"
        write_report(report, p1)
        write_report(report, p2)
        assert p1.read_bytes() == p2.read_bytes()

    def test_rows_cover_exactly_the_observed_classes(self):
        report = self._report()
        body = [
            line for line in report_text(report).splitlines()
            if line and not line.startswith(("#", "fos\t", "macro", "micro", "weighted", "total"))
        ]
        assert len(body) == len(report.per_class)
        assert body == sorted(body)

    def test_empty_class_set_writes_header_only(self, tmp_path):
        report = evaluate([], [], k=1)
        path = tmp_path / "empty.tsv"
        write_report(report, path)
        lines = path.read_text().splitlines()
        assert lines[-1] == "total\t0"
        assert not [l for l in lines if l and not l.startswith(("#", "fos", "macro", "micro", "weighted", "total"))]


def test_load_gold(tmp_path):
    path = tmp_path / "gold.tsv"
    path.write_text("p1\toptics\np2\tenergy\n")
    assert load_gold(path) == [GoldLabel("p1", "optics"), GoldLabel("p2", "energy")]


def test_load_gold_rejects_malformed(tmp_path):
    path = tmp_path / "gold.tsv"
    path.write_text("only-one-column\n")
    with pytest.raises(DataError, match="line 1"):
        load_gold(path)
