"""Synthetic corpus generation for tests and benchmarks.

Venues are grouped by a home field drawn from the taxonomy's level-3 labels.
References concentrate on a few "hub" venues per field, so venue-pair counts
clear the edge threshold at realistic corpus sizes, and raw venue names are
emitted with rotating decorations (years, boilerplate, case) that all
canonicalize back to the same key. Everything is driven by a seeded RNG and
is fully deterministic.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

from .taxonomy import Taxonomy
from .venues import preprocess


@dataclass
class CorpusSpec:
    n_venues: int = 100
    n_records: int = 1000
    n_fields: int | None = None  # cap on distinct level-3 fields; None = all
    refs_per_record: int = 8
    citations_per_record: int = 2
    intra_field_bias: float = 0.8
    hub_bias: float = 0.85
    seed_fraction: float = 0.2
    level2_seed_every: int = 3  # every k-th field also seeds its first hub at level 2
    multi_venue_rate: float = 0.02
    junk_mention_rate: float = 0.002
    year_lo: int = 2016
    year_hi: int = 2021
    decorate: bool = True
    rng_seed: int = 7


@dataclass
class SynthCorpus:
    records_path: Path
    seeds_path: Path
    gold_path: Path
    venue_keys: list[str]
    venue_fields: dict[str, str]  # venue key -> home level-3 field
    hub_keys: list[str]
    n_records: int


def _alpha(i: int) -> str:
    out = []
    i += 1
    while i > 0:
        i, rem = divmod(i - 1, 26)
        out.append(chr(ord("a") + rem))
    return "".join(reversed(out))


def _decorations(base: str, rng: random.Random) -> str:
    styles = (
        base,
        f"{base} 2019",
        f"{base} 2020",
        f"Proceedings of the {base}",
        base.upper(),
    )
    return rng.choice(styles)


def generate_corpus(out_dir: str | Path, taxonomy: Taxonomy, spec: CorpusSpec) -> SynthCorpus:
    """Write records.jsonl, seeds.tsv, and gold.tsv under ``out_dir``."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = random.Random(spec.rng_seed)

    fields = taxonomy.ids_at(3)
    if spec.n_fields is not None:
        fields = fields[: spec.n_fields]
    if not fields:
        raise ValueError("taxonomy has no level-3 labels")

    venue_names: list[str] = []  # base raw name per venue index
    venue_keys: list[str] = []
    venue_fields: dict[str, str] = {}
    groups: dict[str, list[int]] = {f: [] for f in fields}
    for i in range(spec.n_venues):
        home = fields[i % len(fields)]
        # suffix starts with 'q' so it can never hit a stopword or numeral token
        name = f"Journal of {home.title()} Studies Q{_alpha(i)}"
        key = preprocess(name)
        venue_names.append(name)
        venue_keys.append(key)
        venue_fields[key] = home
        groups[home].append(i)

    hubs: dict[str, list[int]] = {}
    for home, members in groups.items():
        if not members:
            continue
        hubs[home] = members[: max(1, len(members) // 6)]

    def mention_name(venue_idx: int) -> str:
        if not spec.decorate:
            return venue_names[venue_idx]
        return _decorations(venue_names[venue_idx], rng)

    def pick_target(home: str) -> int:
        if rng.random() < spec.intra_field_bias:
            if rng.random() < spec.hub_bias:
                return rng.choice(hubs[home])
            return rng.choice(groups[home])
        return rng.randrange(spec.n_venues)

    records_path = out_dir / "records.jsonl"
    gold_path = out_dir / "gold.tsv"
    with open(records_path, "w", encoding="utf-8", newline="\n") as rec_fh, open(
        gold_path, "w", encoding="utf-8", newline="\n"
    ) as gold_fh:
        for r in range(spec.n_records):
            venue_idx = r % spec.n_venues
            home = fields[venue_idx % len(fields)]
            year = rng.randint(spec.year_lo, spec.year_hi)
            published = [mention_name(venue_idx)]
            if rng.random() < spec.multi_venue_rate:
                published.append(mention_name(rng.randrange(spec.n_venues)))
            references = []
            for _ in range(spec.refs_per_record):
                if rng.random() < spec.junk_mention_rate:
                    references.append({"venue": "####", "year": year})
                    continue
                target = pick_target(home)
                ref_year = year - rng.randint(0, 12)
                entry = {"venue": mention_name(target), "year": ref_year}
                if rng.random() < 0.05:
                    entry["year"] = None
                references.append(entry)
            citations = []
            for _ in range(spec.citations_per_record):
                target = pick_target(home)
                citations.append(
                    {"venue": mention_name(target), "year": year + rng.randint(0, 3)}
                )
            record = {
                "id": f"10.5555/synth.{r:07d}",
                "title": f"Synthetic study {r} in {home}",
                "venues": published,
                "year": year,
                "references": references,
                "citations": citations,
            }
            rec_fh.write(json.dumps(record, ensure_ascii=False) + "\n")
            gold_fh.write(f"10.5555/synth.{r:07d}\t{home}\n")

    seeds_path = out_dir / "seeds.tsv"
    hub_keys: list[str] = []
    with open(seeds_path, "w", encoding="utf-8", newline="\n") as fh:
        for field_idx, home in enumerate(fields):
            members = groups[home]
            if not members:
                continue
            n_seeded = max(1, round(spec.seed_fraction * len(members)))
            for venue_idx in members[:n_seeded]:
                fh.write(f"{venue_names[venue_idx]}\t{home}\n")
            hub_keys.extend(venue_keys[i] for i in hubs[home])
            if spec.level2_seed_every and field_idx % spec.level2_seed_every == 0:
                parent = taxonomy.labels[home].parent
                fh.write(f"{venue_names[members[0]]}\t{parent}\n")

    return SynthCorpus(
        records_path=records_path,
        seeds_path=seeds_path,
        gold_path=gold_path,
        venue_keys=venue_keys,
        venue_fields=venue_fields,
        hub_keys=sorted(set(hub_keys)),
        n_records=spec.n_records,
    )
