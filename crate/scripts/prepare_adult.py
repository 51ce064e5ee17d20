#!/usr/bin/env python3
"""Prepend a header row to the UCI Adult training file.

Usage: prepare_adult.py path/to/adult.data > data/adult.csv
"""
import sys

HEADER = [
    "age", "workclass", "fnlwgt", "education", "education-num",
    "marital-status", "occupation", "relationship", "race", "sex",
    "capital-gain", "capital-loss", "hours-per-week", "native-country",
    "income",
]

with open(sys.argv[1]) as src:
    sys.stdout.write(",".join(HEADER) + "\n")
    for line in src:
        if line.strip():
            sys.stdout.write(line)
