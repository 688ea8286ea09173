"""Writes the toy corpus: six rectangular countries, 40 affiliations,
200 paper rows (183 admissible), 12 conference rows and metadata.

Run from this directory: python3 make_toy.py
"""
import json
import random

rng = random.Random(7)

# lon_min, lat_min, lon_max, lat_max
RECTANGLES = {
    "USA": (-120.0, 30.0, -75.0, 48.0),
    "CHN": (80.0, 22.0, 120.0, 42.0),
    "GBR": (-6.0, 50.0, 2.0, 58.0),
    "DEU": (6.0, 47.0, 15.0, 55.0),
    "JPN": (130.0, 31.0, 142.0, 43.0),
    "BRA": (-60.0, -30.0, -38.0, -3.0),
}
AFFILIATIONS_PER_COUNTRY = {"USA": 10, "CHN": 10, "GBR": 6, "DEU": 6, "JPN": 4, "BRA": 4}
INDUSTRIAL = ["A01", "A02", "A11", "A12", "A21", "A27", "A33"]
# Country pairs that never co-author.
NO_COLLABORATION = {("BRA", "CHN"), ("BRA", "JPN"), ("DEU", "JPN"), ("BRA", "GBR")}
METADATA = [
    # iso3, gdp, po, ua, ic, mf, lt, ir, english
    ("BRA", 8717.2, 69, 76, 38, 49, 44, 59, 0),
    ("CHN", 10216.6, 80, 30, 20, 66, 87, 24, 0),
    ("DEU", 46445.2, 35, 65, 67, 66, 83, 40, 0),
    ("GBR", 42300.3, 35, 35, 89, 66, 51, 69, 1),
    ("JPN", 40113.1, 54, 92, 46, 95, 88, 42, 0),
    ("USA", 65118.4, 40, 46, 91, 62, 26, 68, 1),
]


def boundaries():
    features = []
    for iso, (x0, y0, x1, y1) in RECTANGLES.items():
        ring = [[x0, y0], [x1, y0], [x1, y1], [x0, y1], [x0, y0]]
        features.append({
            "type": "Feature",
            "properties": {"iso3": iso},
            "geometry": {"type": "Polygon", "coordinates": [ring]},
        })
    return {"type": "FeatureCollection", "features": features}


def affiliations():
    rows = []
    n = 0
    for iso, count in AFFILIATIONS_PER_COUNTRY.items():
        x0, y0, x1, y1 = RECTANGLES[iso]
        for k in range(count):
            n += 1
            lat = round(rng.uniform(y0 + 0.5, y1 - 0.5), 4)
            lon = round(rng.uniform(x0 + 0.5, x1 - 0.5), 4)
            rows.append([f"A{n:02d}", f"{iso} institute {k + 1}", lat, lon, "", iso])
    by_id = {r[0]: r for r in rows}
    # On the eastern edge of GBR: inside by the boundary-inclusive rule.
    by_id["A25"][2:4] = [53.0, 2.0]
    # About 8 km north-east of the DEU corner (15, 55): nearest-vertex fallback.
    by_id["A27"][2:4] = [55.05, 15.1]
    # Pre-resolved rows bypass geocoding.
    by_id["A05"][4] = "USA"
    by_id["A35"][4] = "JPN"
    return rows


def papers(affs):
    by_country = {}
    for a in affs:
        by_country.setdefault(a[5], []).append(a[0])
    countries = sorted(by_country)
    pairs = [(a, b) for i, a in enumerate(countries) for b in countries[i + 1:] if (a, b) not in NO_COLLABORATION]
    weights = {c: len(v) for c, v in by_country.items()}
    good = []
    for _ in range(183):
        year = rng.choice(range(1990, 2020)) if rng.random() < 0.7 else rng.choice(range(1952, 1990))
        doc = rng.choice(["journal", "conference", "patent", "Journal Paper", "conference paper"])
        cites = rng.randint(0, 120)
        n_auth = rng.randint(2, 4)
        if rng.random() < 0.45:
            a, b = rng.choice(pairs)
            ids = [rng.choice(by_country[a]), rng.choice(by_country[b])]
            ids += [rng.choice(by_country[rng.choice([a, b])]) for _ in range(n_auth - 2)]
        else:
            c = rng.choices(countries, weights=[weights[c] for c in countries])[0]
            ids = [rng.choice(by_country[c]) for _ in range(n_auth)]
        good.append([str(year), doc, str(cites), ";".join(ids)])
    bad = [
        ["2005", "book", "3", "A01;A02"],
        ["2011", "thesis", "0", "A11;A12"],
        ["1999", "book chapter", "7", "A03;A21"],
        ["2016", "dataset", "1", "A04;A13"],
        ["1949", "journal", "5", "A01;A11"],
        ["2020", "conference", "2", "A02;A12"],
        ["2025", "journal", "0", "A03;A23"],
        ["1800", "patent", "1", "A06;A07"],
        ["2010", "patent", "4", "A01"],
        ["2003", "journal", "9", "A14"],
        ["2018", "conference", "0", "A22"],
        ["1995", "journal", "12", "A31"],
        ["", "conference", "3", "A01;A15"],
        ["2012", "journal", "", "A02;A16"],
        ["2013", "", "6", "A03;A17"],
        ["2008", "journal", "abc", "A04;A18"],
        ["2009", "journal", "5"],  # missing a column
    ]
    rows = good + bad
    rng.shuffle(rows)
    return [[f"P{i + 1:04d}"] + r for i, r in enumerate(rows)]


def conferences():
    rows = []
    inside = ["USA", "USA", "USA", "CHN", "CHN", "GBR", "DEU", "DEU", "JPN", "BRA"]
    for i, iso in enumerate(inside):
        x0, y0, x1, y1 = RECTANGLES[iso]
        rows.append([f"C{i + 1:02d}", round(rng.uniform(y0 + 1, y1 - 1), 3), round(rng.uniform(x0 + 1, x1 - 1), 3)])
    rows.append(["C11", -40.0, -140.0])  # South Pacific
    rows.append(["C12", 0.0, -25.0])  # Equatorial Atlantic
    return rows


def tsv(path, header, rows):
    with open(path, "w", encoding="utf-8") as f:
        f.write("\t".join(header) + "\n")
        for r in rows:
            f.write("\t".join(str(x) for x in r) + "\n")


def main():
    affs = affiliations()
    tsv("affiliations.tsv", ["affiliation_id", "name", "latitude", "longitude", "iso3"], [a[:5] for a in affs])
    tsv("papers.tsv", ["paper_id", "year", "doc_type", "citation_count", "affiliation_ids"], papers(affs))
    with open("conferences.csv", "w", encoding="utf-8") as f:
        f.write("conference_id,latitude,longitude\n")
        for r in conferences():
            f.write(",".join(str(x) for x in r) + "\n")
    with open("country_metadata.csv", "w", encoding="utf-8") as f:
        f.write("iso3,gdp_per_capita,po,ua,ic,mf,lt,ir,english\n")
        for r in METADATA:
            f.write(",".join(str(x) for x in r) + "\n")
    with open("industrial_ids.txt", "w", encoding="utf-8") as f:
        f.write("\n".join(INDUSTRIAL) + "\n")
    with open("boundaries.geojson", "w", encoding="utf-8") as f:
        json.dump(boundaries(), f, indent=1)
        f.write("\n")


if __name__ == "__main__":
    main()
