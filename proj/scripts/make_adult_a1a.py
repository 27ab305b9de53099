#!/usr/bin/env python3
"""Build a1a-sized binarized subsets of the UCI Adult census data.

Produces 123 binary features in the usual layout (continuous attributes
quantized into quantile bins, categorical attributes one-hot encoded, missing
values left as all-zero groups) and splits adult.data into 1,605 training rows
and the remaining 30,956 rows for testing.

    python3 scripts/make_adult_a1a.py adult.data data/adult --train 1605 --seed 1
"""
import argparse
import gzip
import os
import random

import numpy as np

CATEGORIES = {
    "workclass": "Private, Self-emp-not-inc, Self-emp-inc, Federal-gov, Local-gov, State-gov, Without-pay, Never-worked",
    "education": "Bachelors, Some-college, 11th, HS-grad, Prof-school, Assoc-acdm, Assoc-voc, 9th, 7th-8th, 12th, Masters, 1st-4th, 10th, Doctorate, 5th-6th, Preschool",
    "marital-status": "Married-civ-spouse, Divorced, Never-married, Separated, Widowed, Married-spouse-absent, Married-AF-spouse",
    "occupation": "Tech-support, Craft-repair, Other-service, Sales, Exec-managerial, Prof-specialty, Handlers-cleaners, Machine-op-inspct, Adm-clerical, Farming-fishing, Transport-moving, Priv-house-serv, Protective-serv, Armed-Forces",
    "relationship": "Wife, Own-child, Husband, Not-in-family, Other-relative, Unmarried",
    "race": "White, Asian-Pac-Islander, Amer-Indian-Eskimo, Other, Black",
    "sex": "Female, Male",
    "native-country": "United-States, Cambodia, England, Puerto-Rico, Canada, Germany, Outlying-US(Guam-USVI-etc), India, Japan, Greece, South, China, Cuba, Iran, Honduras, Philippines, Italy, Poland, Jamaica, Vietnam, Mexico, Portugal, Ireland, France, Dominican-Republic, Laos, Ecuador, Taiwan, Haiti, Columbia, Hungary, Guatemala, Nicaragua, Scotland, Thailand, Yugoslavia, El-Salvador, Trinadad&Tobago, Peru, Hong, Holand-Netherlands",
}
CATEGORIES = {k: [s.strip() for s in v.split(",")] for k, v in CATEGORIES.items()}

COLUMNS = ["age", "workclass", "fnlwgt", "education", "education-num",
           "marital-status", "occupation", "relationship", "race", "sex",
           "capital-gain", "capital-loss", "hours-per-week", "native-country"]
QUANTILE_BINS = {"age": 5, "fnlwgt": 5, "education-num": 5, "hours-per-week": 5}
NONZERO_BINS = {"capital-gain", "capital-loss"}


def read_rows(path):
    rows = []
    with open(path) as fh:
        for line in fh:
            parts = [p.strip() for p in line.strip().rstrip(".").split(",")]
            if len(parts) != 15:
                continue
            rows.append(parts)
    return rows


def encode(rows):
    edges = {}
    for name, bins in QUANTILE_BINS.items():
        col = np.array([float(r[COLUMNS.index(name)]) for r in rows])
        edges[name] = np.quantile(col, np.linspace(0, 1, bins + 1)[1:-1])
    out = []
    for r in rows:
        idx = []
        offset = 0
        for j, name in enumerate(COLUMNS):
            v = r[j]
            if name in QUANTILE_BINS:
                b = int(np.searchsorted(edges[name], float(v), side="right"))
                idx.append(offset + b)
                offset += QUANTILE_BINS[name]
            elif name in NONZERO_BINS:
                idx.append(offset + (1 if float(v) > 0 else 0))
                offset += 2
            else:
                cats = CATEGORIES[name]
                if v in cats:
                    idx.append(offset + cats.index(v))
                offset += len(cats)
        assert offset == 123, offset
        label = "+1" if r[14].startswith(">50K") else "-1"
        out.append(label + " " + " ".join(f"{i + 1}:1" for i in sorted(idx)))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("adult_data")
    ap.add_argument("outdir")
    ap.add_argument("--train", type=int, default=1605)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()

    lines = encode(read_rows(args.adult_data))
    order = list(range(len(lines)))
    random.Random(args.seed).shuffle(order)
    train = sorted(order[:args.train])
    test = sorted(order[args.train:])
    os.makedirs(args.outdir, exist_ok=True)
    for name, ids in (("a1a.svm.gz", train), ("a1a.t.svm.gz", test)):
        with gzip.GzipFile(os.path.join(args.outdir, name), "wb", mtime=0) as fh:
            fh.write(("\n".join(lines[i] for i in ids) + "\n").encode())
        print(name, len(ids))


if __name__ == "__main__":
    main()
