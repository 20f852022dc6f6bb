"""Published reference values for the French ECHP sample (wave 3, 1996).

Frequencies are in percent unless stated otherwise. These tables are used to
calibrate synthetic data and to compare observed item frequencies against.
"""

# Share of households on the negative modality, per item.
ITEM_NEGATIVE_PERCENT = {
    "CLB": 3.4, "CLE": 1.9, "CLW": 2.6, "CLR": 10.4, "CLC": 9.5,
    "PLF": 9.6, "PLM": 14.6, "PLT": 4.8, "PLE": 12.0, "PLS": 9.2,
    "EB": 18.5, "EVB": 9.9, "EP": 14.8, "EV": 22.0,
    "PHO": 1.3, "TEV": 1.3, "CAR": 6.0, "FMO": 7.8, "VCR": 9.3, "LV": 10.1,
    "NVIP": 5.0, "NVET": 9.1, "NCHF": 6.9, "NMOB": 37.3, "NVAC": 33.5, "NAMI": 11.0,
}

N_HOUSEHOLDS = 6458

# Distribution of the total deprivation score (percent of households).
SCORE_PERCENT = {
    0: 23.2, 1: 14.3, 2: 14.5, 3: 8.6, 4: 9.0, 5: 6.5, 6: 5.7, 7: 3.9,
    8: 3.5, 9: 2.9, 10: 2.3, 11: 1.6, 12: 1.4, 13: 0.9, 14: 0.6, 15: 0.6,
    16: 0.2, 17: 0.1, 18: 0.1, 19: 0.1, 20: 0.0, 21: 0.0, 22: 0.0, 23: 0.0,
}
MONETARY_POVERTY_PERCENT = 10.7

# Categorical descriptor marginals; keys are the stored level codes.
LOGT_LEVELS = {1: "House, isolated", 2: "House, in a neighborhood",
               3: "Structure <10 units", 4: "Structure >=10 units", 5: "Other"}
TUR_LEVELS = {0: "Rural town", 1: "City <10000 inh", 2: "10000 to <100000 inh",
              3: "100000 to <2000000 inh", 4: "Paris area"}
TYM_LEVELS = {0: "one person household", 1: "couple without child",
              2: "couple with child(ren)", 3: "lone parent family", 4: "other type"}
SLS_LEVELS = {1: "with great difficulty", 2: "with difficulty",
              3: "with some difficulty", 4: "fairly easily",
              5: "easily and very easily"}

LOGT_PERCENT = (39.9, 21.4, 13.4, 24.3, 1.0)
TUR_PERCENT = (27.7, 10.9, 19.5, 28.5, 13.5)
TYM_PERCENT = (25.1, 26.3, 37.5, 7.3, 3.8)
SLS_PERCENT = (5.7, 12.3, 29.6, 39.0, 13.3)
MEAN_PERSONS = 2.6
MEAN_CHILDREN_UNDER17 = 0.6
MEAN_ADULT_AGE = 46.7
MEAN_INCOME_PER_CU = 7650.0

# Five household classes obtained from the full item set: size share and
# per-item negative frequencies (percent), in default codebook order.
HOUSEHOLD_CLASS_WEIGHTS = (70.6, 8.7, 5.5, 13.3, 1.9)
HOUSEHOLD_CLASS_ITEM_PERCENT = (
    # CLB  CLE  CLW  CLR  CLC  PLF  PLM  PLT  PLE  PLS  EB   EVB  EP   EV   PHO  TEV  CAR   FMO   VCR  LV   NVIP NVET NCHF NMOB NVAC NAMI
    (2.7, 0.0, 1.8, 1.0, 1.9, 6.6, 11.5, 3.6, 9.2, 6.7, 16.0, 8.3, 13.7, 20.7, 0.0, 0.0, 3.1, 0.2, 4.1, 5.4, 0.2, 0.4, 3.1, 26.2, 24.5, 5.8),
    (0.0, 0.0, 0.9, 10.9, 17.5, 15.3, 19.8, 6.4, 19.1, 13.6, 26.4, 13.2, 19.3, 31.4, 0.0, 0.0, 14.6, 10.3, 20.7, 20.5, 46.9, 76.1, 28.0, 92.0, 79.0, 48.5),
    (0.0, 0.0, 0.6, 8.2, 16.7, 13.6, 21.2, 6.8, 20.6, 13.0, 26.3, 15.5, 19.5, 27.1, 0.0, 0.6, 18.9, 100.0, 39.8, 48.9, 0.0, 15.0, 11.9, 68.6, 57.9, 20.1),
    (0.7, 0.2, 2.3, 52.0, 45.5, 16.8, 22.2, 7.9, 18.6, 16.3, 23.3, 14.2, 14.9, 21.5, 9.1, 8.5, 10.0, 7.2, 15.6, 11.6, 3.6, 6.6, 9.9, 43.9, 36.7, 7.3),
    (71.5, 100.0, 49.6, 26.0, 30.1, 30.1, 31.7, 17.9, 15.5, 21.1, 17.1, 9.8, 19.5, 16.3, 4.1, 4.9, 10.6, 14.6, 17.1, 15.5, 16.3, 25.2, 20.3, 61.0, 69.1, 33.3),
)
HOUSEHOLD_CLASS_DESCRIPTORS = (
    {"LOGT": (43.5, 21.5, 11.8, 22.4, 0.8), "TUR": (27.5, 11.2, 19.0, 28.1, 14.2),
     "TYM": (21.7, 28.2, 40.1, 6.3, 3.8), "SLS": (2.0, 9.6, 27.6, 44.6, 16.1),
     "AGEM": 47.9, "REVUC": 8378.0},
    {"LOGT": (28.5, 20.3, 15.7, 34.6, 0.9), "TUR": (24.4, 8.7, 20.9, 32.6, 13.4),
     "TYM": (33.0, 17.3, 30.3, 16.0, 3.4), "SLS": (25.7, 29.8, 34.8, 8.6, 1.3),
     "AGEM": 46.5, "REVUC": 5103.0},
    {"LOGT": (27.4, 22.0, 15.8, 34.5, 0.3), "TUR": (26.8, 10.7, 21.2, 30.2, 11.0),
     "TYM": (27.1, 21.8, 35.6, 10.7, 4.8), "SLS": (14.1, 20.3, 40.1, 22.0, 3.4),
     "AGEM": 41.9, "REVUC": 5457.0},
    {"LOGT": (33.2, 18.8, 19.2, 26.7, 2.1), "TUR": (28.8, 11.4, 20.9, 27.1, 11.9),
     "TYM": (33.8, 25.4, 31.9, 5.1, 3.7), "SLS": (7.2, 12.4, 31.1, 38.1, 11.2),
     "AGEM": 40.6, "REVUC": 6797.0},
    {"LOGT": (41.5, 36.6, 13.8, 4.1, 4.1), "TUR": (45.5, 6.5, 17.1, 26.0, 4.9),
     "TYM": (48.8, 15.5, 19.5, 8.9, 7.3), "SLS": (13.9, 10.7, 41.0, 27.1, 7.4),
     "AGEM": 58.2, "REVUC": 4565.0},
)
