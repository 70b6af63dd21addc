"""Macro/micro/weighted-macro F1 over classification results.

Gold labels are single-label per publication. A top-k prediction list is
reduced to one effective prediction: the gold label if it appears among the
first k predictions, otherwise the top-1 prediction. A publication with no
predictions at all counts as a miss for its gold class (false negative, no
false positive anywhere).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path

from .classify import ClassificationResult
from .errors import ConfigError, DataError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class GoldLabel:
    publication_id: str
    fos_id: str


@dataclass
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int
    predicted: int


@dataclass
class MetricsReport:
    k: int
    total: int
    macro_f1: float
    micro_f1: float
    weighted_macro_f1: float
    per_class: dict[str, ClassMetrics]


def load_gold(path: str | Path) -> list[GoldLabel]:
    """Tab-separated (publication id, fos id), one row per publication."""
    gold = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2 or not parts[0] or not parts[1]:
                raise DataError(f"{path}: line {lineno}: expected 'id<TAB>fos'")
            gold.append(GoldLabel(parts[0], parts[1]))
    return gold


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0.0:
        return 0.0
    return 2.0 * precision * recall / (precision + recall)


def evaluate(
    results: list[ClassificationResult],
    gold: list[GoldLabel],
    k: int = 1,
) -> MetricsReport:
    """Score predictions against gold labels under the top-k setting.

    Every gold id must have a result (an unclassifiable result is allowed and
    scored as a miss). Classes never seen in gold but present in predictions
    get per-class rows with support 0 and take part in the macro mean;
    weighted-macro weighs each class by its gold support.
    """
    if not isinstance(k, int) or k < 1:
        raise ConfigError(f"k must be a positive integer, got {k!r}")
    by_id: dict[str, ClassificationResult] = {}
    for result in results:
        by_id[result.publication_id] = result
    seen: set[str] = set()
    tp: dict[str, int] = {}
    fp: dict[str, int] = {}
    fn: dict[str, int] = {}
    support: dict[str, int] = {}
    predicted: dict[str, int] = {}
    for entry in gold:
        if entry.publication_id in seen:
            raise DataError(f"duplicate gold id {entry.publication_id!r}")
        seen.add(entry.publication_id)
        result = by_id.get(entry.publication_id)
        if result is None:
            raise DataError(f"no classification result for gold id {entry.publication_id!r}")
        ranked = [s.fos_id for s in result.labels]
        if entry.fos_id in ranked[:k]:
            effective = entry.fos_id
        elif ranked:
            effective = ranked[0]
        else:
            effective = None
        support[entry.fos_id] = support.get(entry.fos_id, 0) + 1
        if effective == entry.fos_id:
            tp[entry.fos_id] = tp.get(entry.fos_id, 0) + 1
        else:
            fn[entry.fos_id] = fn.get(entry.fos_id, 0) + 1
            if effective is not None:
                fp[effective] = fp.get(effective, 0) + 1
        if effective is not None:
            predicted[effective] = predicted.get(effective, 0) + 1

    classes = sorted(set(support) | set(predicted))
    per_class: dict[str, ClassMetrics] = {}
    for cls in classes:
        tp_c, fp_c, fn_c = tp.get(cls, 0), fp.get(cls, 0), fn.get(cls, 0)
        precision = tp_c / (tp_c + fp_c) if tp_c + fp_c else 0.0
        recall = tp_c / (tp_c + fn_c) if tp_c + fn_c else 0.0
        per_class[cls] = ClassMetrics(
            precision, recall, _f1(precision, recall), support.get(cls, 0), predicted.get(cls, 0)
        )

    total = len(gold)
    macro = sum(m.f1 for m in per_class.values()) / len(per_class) if per_class else 0.0
    weighted = (
        sum(m.support * m.f1 for m in per_class.values()) / total if total else 0.0
    )
    tp_all = sum(tp.values())
    fp_all = sum(fp.values())
    fn_all = sum(fn.values())
    micro_p = tp_all / (tp_all + fp_all) if tp_all + fp_all else 0.0
    micro_r = tp_all / (tp_all + fn_all) if tp_all + fn_all else 0.0
    return MetricsReport(
        k=k,
        total=total,
        macro_f1=macro,
        micro_f1=_f1(micro_p, micro_r),
        weighted_macro_f1=weighted,
        per_class=per_class,
    )


def report_text(report: MetricsReport) -> str:
    """Tab-separated per-class table sorted by label id, plus aggregate footer."""
    lines = [
        "# fos-metrics v1",
        f"# setting\ttop-{report.k}",
        "# classes with zero gold support appear when predicted; macro averages all rows",
        "fos\tprecision\trecall\tf1\tsupport\tpredicted",
    ]
    for cls in sorted(report.per_class):
        m = report.per_class[cls]
        lines.append(
            f"{cls}\t{m.precision:.9f}\t{m.recall:.9f}\t{m.f1:.9f}\t{m.support}\t{m.predicted}"
        )
    lines.append(f"macro_f1\t{report.macro_f1:.9f}")
    lines.append(f"micro_f1\t{report.micro_f1:.9f}")
    lines.append(f"weighted_macro_f1\t{report.weighted_macro_f1:.9f}")
    lines.append(f"total\t{report.total}")
    return "\n".join(lines) + "\n"


def write_report(report: MetricsReport, path: str | Path) -> None:
    if not report.per_class:
        log.warning("metrics report has no classes; writing header only")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(report_text(report))
