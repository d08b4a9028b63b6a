#!/usr/bin/env python3
"""Builds the audit fixtures in data/ from the raw public datasets in data/raw/.

compas.csv
    ProPublica two-year COMPAS extract, filtered exactly like the ProPublica
    analysis notebook (screening within +-30 days of arrest, known recidivism
    outcome, no ordinary traffic offences, scored). The label is is_recid and
    decile_score is kept raw; the audit config turns scores above 4 into
    positive predictions.

adult.csv
    UCI Adult training split with a model prediction column. The model is a
    gradient boosted classifier scored with 5-fold out-of-fold predictions so
    every row carries a prediction the model did not train on.

Run from the repository root:  python3 data/prepare_fixtures.py
"""

import pathlib

import numpy as np
import pandas as pd
from sklearn.ensemble import HistGradientBoostingClassifier
from sklearn.model_selection import cross_val_predict

HERE = pathlib.Path(__file__).resolve().parent
RAW = HERE / "raw"

ADULT_COLUMNS = [
    "age", "workclass", "fnlwgt", "education", "education-num",
    "marital-status", "occupation", "relationship", "race", "sex",
    "capital-gain", "capital-loss", "hours-per-week", "native-country",
    "income",
]


def prepare_compas():
    df = pd.read_csv(RAW / "compas-scores-two-years.csv")
    df = df[(df.days_b_screening_arrest <= 30)
            & (df.days_b_screening_arrest >= -30)
            & (df.is_recid != -1)
            & (df.c_charge_degree != "O")
            & (df.score_text != "N/A")]
    cols = ["sex", "age_cat", "race", "c_charge_degree", "priors_count",
            "juv_fel_count", "juv_misd_count", "decile_score", "is_recid"]
    out = df[cols]
    out.to_csv(HERE / "compas.csv", index=False)
    print(f"compas.csv: {len(out)} rows")


def prepare_adult():
    df = pd.read_csv(RAW / "adult.data", header=None, names=ADULT_COLUMNS,
                     skipinitialspace=True)
    y = (df["income"] == ">50K").astype(int).to_numpy()
    x = df.drop(columns=["income"]).copy()
    categorical = [c for c in x.columns if x[c].dtype == object]
    for c in categorical:
        x[c] = x[c].astype("category")
    model = HistGradientBoostingClassifier(categorical_features="from_dtype",
                                           random_state=0)
    pred = cross_val_predict(model, x, y, cv=5)
    print(f"adult.csv: {len(df)} rows, out-of-fold accuracy "
          f"{np.mean(pred == y):.4f}")
    out = df.copy()
    out["prediction"] = np.where(pred == 1, ">50K", "<=50K")
    out.to_csv(HERE / "adult.csv", index=False)


if __name__ == "__main__":
    prepare_compas()
    prepare_adult()
