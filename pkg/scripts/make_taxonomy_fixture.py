#!/usr/bin/env python3
"""Emit the bundled 3-level field-of-science taxonomy fixture.

Levels 1 and 2 are the OECD/FORD discipline scheme (6 and 42 entries);
level 3 carries 174 journal-classification subfields in the Science-Metrix
style, attached to level-2 parents. Subfield placement is this project's
own; only the level sizes are fixed.

Usage: python scripts/make_taxonomy_fixture.py [OUTPUT]
Default output: tests/data/taxonomy.tsv
"""

import sys
from pathlib import Path

LEVEL1 = [
    "natural sciences",
    "engineering and technology",
    "medical and health sciences",
    "agricultural and veterinary sciences",
    "social sciences",
    "humanities and the arts",
]

# level-2 id -> level-1 parent
LEVEL2 = {
    "mathematics": "natural sciences",
    "computer and information sciences": "natural sciences",
    "physical sciences": "natural sciences",
    "chemical sciences": "natural sciences",
    "earth and related environmental sciences": "natural sciences",
    "biological sciences": "natural sciences",
    "other natural sciences": "natural sciences",
    "civil engineering": "engineering and technology",
    "electrical engineering, electronic engineering, information engineering": "engineering and technology",
    "mechanical engineering": "engineering and technology",
    "chemical engineering": "engineering and technology",
    "materials engineering": "engineering and technology",
    "medical engineering": "engineering and technology",
    "environmental engineering": "engineering and technology",
    "environmental biotechnology": "engineering and technology",
    "industrial biotechnology": "engineering and technology",
    "nano-technology": "engineering and technology",
    "other engineering and technologies": "engineering and technology",
    "basic medicine": "medical and health sciences",
    "clinical medicine": "medical and health sciences",
    "health sciences": "medical and health sciences",
    "medical biotechnology": "medical and health sciences",
    "other medical sciences": "medical and health sciences",
    "agriculture, forestry, and fisheries": "agricultural and veterinary sciences",
    "animal and dairy science": "agricultural and veterinary sciences",
    "veterinary science": "agricultural and veterinary sciences",
    "agricultural biotechnology": "agricultural and veterinary sciences",
    "other agricultural sciences": "agricultural and veterinary sciences",
    "psychology and cognitive sciences": "social sciences",
    "economics and business": "social sciences",
    "education": "social sciences",
    "sociology": "social sciences",
    "law": "social sciences",
    "political science": "social sciences",
    "social and economic geography": "social sciences",
    "media and communications": "social sciences",
    "other social sciences": "social sciences",
    "history and archaeology": "humanities and the arts",
    "languages and literature": "humanities and the arts",
    "philosophy, ethics and religion": "humanities and the arts",
    "arts": "humanities and the arts",
    "other humanities": "humanities and the arts",
}

# level-2 id -> its level-3 subfields
LEVEL3 = {
    "mathematics": [
        "applied mathematics",
        "general mathematics",
        "statistics & probability",
        "numerical & computational mathematics",
    ],
    "computer and information sciences": [
        "artificial intelligence & image processing",
        "software engineering",
        "computation theory & mathematics",
        "computer hardware & architecture",
        "distributed computing",
        "information systems",
        "networking & telecommunications",
        "medical informatics",
    ],
    "physical sciences": [
        "optics",
        "astronomy & astrophysics",
        "applied physics",
        "chemical physics",
        "fluids & plasmas",
        "general physics",
        "mathematical physics",
        "nuclear & particle physics",
        "acoustics",
    ],
    "chemical sciences": [
        "analytical chemistry",
        "general chemistry",
        "inorganic & nuclear chemistry",
        "medicinal & biomolecular chemistry",
        "organic chemistry",
        "physical chemistry",
        "polymers",
    ],
    "earth and related environmental sciences": [
        "environmental sciences",
        "geochemistry & geophysics",
        "geology",
        "meteorology & atmospheric sciences",
        "oceanography",
        "paleontology",
        "physical geography",
    ],
    "biological sciences": [
        "biochemistry & molecular biology",
        "biophysics",
        "developmental biology",
        "ecology",
        "entomology",
        "evolutionary biology",
        "genetics & heredity",
        "marine biology & hydrobiology",
        "microbiology",
        "mycology & parasitology",
        "physiology",
        "plant biology & botany",
        "zoology",
        "anatomy & morphology",
        "behavioral science & comparative psychology",
        "bioinformatics",
    ],
    "other natural sciences": [
        "multidisciplinary natural sciences",
    ],
    "civil engineering": [
        "building & construction",
        "geological & geomatics engineering",
        "transportation engineering",
    ],
    "electrical engineering, electronic engineering, information engineering": [
        "electrical & electronic engineering",
        "automation & control systems",
        "signal processing",
        "microelectronics & semiconductors",
        "optoelectronics & photonics",
    ],
    "mechanical engineering": [
        "mechanical engineering & transports",
        "aerospace & aeronautics",
        "automobile design & engineering",
    ],
    "chemical engineering": [
        "chemical process engineering",
        "petroleum & chemical processing",
    ],
    "materials engineering": [
        "materials science",
        "ceramics & composites",
        "metallurgy & metals",
        "textiles",
    ],
    "medical engineering": [
        "biomedical engineering",
        "medical devices & instrumentation",
    ],
    "environmental engineering": [
        "environmental engineering practice",
        "water resources engineering",
        "waste management & remediation",
    ],
    "environmental biotechnology": [
        "environmental biotechnology applications",
        "bioremediation technologies",
    ],
    "industrial biotechnology": [
        "bioprocess engineering",
        "biofuels & bioproducts",
    ],
    "nano-technology": [
        "nanoscience & technology",
        "nanomaterials",
    ],
    "other engineering and technologies": [
        "energy",
        "industrial engineering & automation",
        "operations research",
        "strategic defence & security studies",
    ],
    "basic medicine": [
        "pharmacology & pharmacy",
        "toxicology",
        "immunology",
        "neuroscience & neurology",
        "pathology",
        "medical microbiology & virology",
        "human genetics",
    ],
    "clinical medicine": [
        "general & internal medicine",
        "cardiovascular system & hematology",
        "oncology & carcinogenesis",
        "dentistry",
        "dermatology & venereal diseases",
        "emergency & critical care medicine",
        "anesthesiology",
        "endocrinology & metabolism",
        "gastroenterology & hepatology",
        "geriatrics",
        "obstetrics & reproductive medicine",
        "ophthalmology & optometry",
        "orthopedics",
        "otorhinolaryngology",
        "pediatrics",
        "psychiatry",
        "radiology & nuclear medicine",
        "respiratory system diseases",
        "surgery",
        "urology & nephrology",
        "arthritis & rheumatology",
        "infectious diseases",
    ],
    "health sciences": [
        "public health",
        "epidemiology",
        "health policy & services",
        "nursing",
        "nutrition & dietetics",
        "sport sciences",
        "substance abuse",
        "gerontology",
        "speech-language pathology & audiology",
        "rehabilitation therapy",
        "tropical medicine",
    ],
    "medical biotechnology": [
        "gene & cell therapy technologies",
        "diagnostic biotechnology",
    ],
    "other medical sciences": [
        "legal & forensic medicine",
        "complementary & alternative medicine",
    ],
    "agriculture, forestry, and fisheries": [
        "agronomy & agriculture",
        "fisheries",
        "forestry",
        "horticulture",
    ],
    "animal and dairy science": [
        "dairy & animal science",
    ],
    "veterinary science": [
        "veterinary sciences",
    ],
    "agricultural biotechnology": [
        "agricultural biotechnology applications",
    ],
    "other agricultural sciences": [
        "food science",
    ],
    "psychology and cognitive sciences": [
        "clinical psychology",
        "developmental & child psychology",
        "experimental psychology",
        "social psychology",
        "human factors",
    ],
    "economics and business": [
        "economics",
        "econometrics",
        "finance",
        "business & management",
        "marketing",
        "accounting",
        "logistics & transportation",
    ],
    "education": [
        "education policy & practice",
        "higher education studies",
    ],
    "sociology": [
        "general sociology",
        "social work",
        "family studies",
        "demography",
    ],
    "law": [
        "general law",
        "criminology",
    ],
    "political science": [
        "political science & public administration",
        "international relations",
    ],
    "social and economic geography": [
        "economic geography",
        "urban & regional planning",
    ],
    "media and communications": [
        "communication & media studies",
        "journalism studies",
    ],
    "other social sciences": [
        "anthropology",
        "science & technology studies",
        "information & library sciences",
    ],
    "history and archaeology": [
        "history",
        "archaeology",
    ],
    "languages and literature": [
        "languages & linguistics",
        "literary studies",
    ],
    "philosophy, ethics and religion": [
        "philosophy",
        "religions & theology",
    ],
    "arts": [
        "art practice history & theory",
        "music & musicology",
    ],
    "other humanities": [
        "digital humanities",
    ],
}


def rows():
    for l1 in LEVEL1:
        yield (l1, l1.title(), 1, "")
    for l2, parent in LEVEL2.items():
        yield (l2, l2.title(), 2, parent)
    for l2 in LEVEL2:
        for l3 in LEVEL3.get(l2, []):
            yield (l3, l3.title(), 3, l2)


def main() -> int:
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("tests/data/taxonomy.tsv")
    out.parent.mkdir(parents=True, exist_ok=True)
    all_rows = list(rows())
    counts = {1: 0, 2: 0, 3: 0}
    for _, _, level, _ in all_rows:
        counts[level] += 1
    assert counts == {1: 6, 2: 42, 3: 174}, counts
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        for fos_id, name, level, parent in all_rows:
            fh.write(f"{fos_id}\t{name}\t{level}\t{parent}\n")
    print(f"wrote {sum(counts.values())} labels ({counts[1]}/{counts[2]}/{counts[3]}) to {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
