"""Published reference values used by several test modules."""

import math

import numpy as np

S2, S3, S5, S6 = math.sqrt(2), math.sqrt(3), math.sqrt(5), math.sqrt(6)
S10, S14, S15, S21 = math.sqrt(10), math.sqrt(14), math.sqrt(15), math.sqrt(21)

# Pi^2 * delta^2 on 8 field points, as printed (limited significant figures)
PI2_PRINTED = {
    ("periodic", "fd"): """
 2 -1 0 0 0 0 0 -1
 -1 2 -1 0 0 0 0 0
 0 -1 2 -1 0 0 0 0
 0 0 -1 2 -1 0 0 0
 0 0 0 -1 2 -1 0 0
 0 0 0 0 -1 2 -1 0
 0 0 0 0 0 -1 2 -1
 -1 0 0 0 0 0 -1 2""",
    ("periodic", "improved1"): """
2.5 -1.3 0.083 0 0 0 0.083 -1.3
-1.3 2.5 -1.3 0.083 0 0 0 0.083
0.083 -1.3 2.5 -1.3 0.083 0 0 0
0 0.083 -1.3 2.5 -1.3 0.083 0 0
0 0 0.083 -1.3 2.5 -1.3 0.083 0
0 0 0 0.083 -1.3 2.5 -1.3 0.083
0.083 0 0 0 0.083 -1.3 2.5 -1.3
-1.3 0.083 0 0 0 0.083 -1.3 2.5""",
    ("periodic", "exact"): """
3.39 -2.11 0.617 -0.361 0.308 -0.361 0.617 -2.11
-2.11 3.39 -2.11 0.617 -0.361 0.308 -0.361 0.617
0.617 -2.11 3.39 -2.11 0.617 -0.361 0.308 -0.361
-0.361 0.617 -2.11 3.39 -2.11 0.617 -0.361 0.308
0.308 -0.361 0.617 -2.11 3.39 -2.11 0.617 -0.361
-0.361 0.308 -0.361 0.617 -2.11 3.39 -2.11 0.617
0.617 -0.361 0.308 -0.361 0.617 -2.11 3.39 -2.11
-2.11 0.617 -0.361 0.308 -0.361 0.617 -2.11 3.39""",
    ("twisted", "fd"): """
2 -1 0 0 0 0 0 1
-1 2 -1 0 0 0 0 0
0 -1 2 -1 0 0 0 0
0 0 -1 2 -1 0 0 0
0 0 0 -1 2 -1 0 0
0 0 0 0 -1 2 -1 0
0 0 0 0 0 -1 2 -1
1 0 0 0 0 0 -1 2""",
    ("twisted", "improved1"): """
2.5 -1.3 0.083 0 0 0 -0.083 1.3
-1.3 2.5 -1.3 0.083 0 0 0 -0.083
0.083 -1.3 2.5 -1.3 0.083 0 0 0
0 0.083 -1.3 2.5 -1.3 0.083 0 0
0 0 0.083 -1.3 2.5 -1.3 0.083 0
0 0 0 0.083 -1.3 2.5 -1.3 0.083
-0.083 0 0 0 0.083 -1.3 2.5 -1.3
1.3 -0.083 0 0 0 0.083 -1.3 2.5""",
    ("twisted", "exact"): """
3.24 -1.95 0.436 -0.138 0 0.138 -0.436 1.95
-1.95 3.24 -1.95 0.436 -0.138 0 0.138 -0.436
0.436 -1.95 3.24 -1.95 0.436 -0.138 0 0.138
-0.138 0.436 -1.95 3.24 -1.95 0.436 -0.138 0
0 -0.138 0.436 -1.95 3.24 -1.95 0.436 -0.138
0.138 0 -0.138 0.436 -1.95 3.24 -1.95 0.436
-0.436 0.138 0 -0.138 0.436 -1.95 3.24 -1.95
1.95 -0.436 0.138 0 -0.138 0.436 -1.95 3.24""",
}


def printed_matrix(key):
    """(values, half-unit-in-last-place tolerance) for a printed matrix."""
    rows = [r.split() for r in PI2_PRINTED[key].strip().splitlines()]
    vals = np.array([[float(t) for t in r] for r in rows])
    tol = np.array([[0.5 * 10.0 ** -len(t.split(".")[1]) if "." in t else 1e-12 for t in r] for r in rows])
    return vals, tol


# diagonal Z-string operator shared by phi^2 and Pi^2 in the field grid basis
O0 = {
    3: {"ZZI": 4, "ZIZ": 2, "IZZ": 1, "III": 21 / 4},
    4: {"ZZII": 16, "ZIZI": 8, "ZIIZ": 4, "IZZI": 4, "IZIZ": 2, "IIZZ": 1, "IIII": 85 / 4},
    5: {"ZZIII": 64, "ZIZII": 32, "ZIIZI": 16, "ZIIIZ": 8, "IZZII": 16, "IZIZI": 8, "IZIIZ": 4,
        "IIZZI": 4, "IIZIZ": 2, "IIIZZ": 1, "IIIII": 341 / 4},
}
# phi^2 = PHI2_PREFACTOR[n] * phi_max^2 * O0 ; Pi^2 = PI2_PREFACTOR[n] / phi_max^2 * O0
PHI2_PREFACTOR = {3: 4 / 49, 4: 4 / 225, 5: 4 / 961}
PI2_PREFACTOR = {3: 49 * math.pi ** 2 / 64, 4: 225 * math.pi ** 2 / 256, 5: 961 * math.pi ** 2 / 1024}

# HO basis, 3 qubits. H_basis / omega
HO_BASIS = {"III": 4, "ZII": -2, "IZI": -1, "IIZ": -0.5}
# delta H / ((1 - omega^2) / omega)
HO_DELTA = {
    "XXZ": (S3 - S5) / 8, "XXI": (S3 + S5) / 8,
    "YYZ": (S3 - S5) / 8, "YYI": (S3 + S5) / 8,
    "ZXZ": (1 - S3 + S21 - S15) / (8 * S2), "ZXI": (1 + S3 - S21 - S15) / (8 * S2),
    "IXZ": (1 - S3 - S21 + S15) / (8 * S2), "IXI": (1 + S3 + S21 + S15) / (8 * S2),
    "ZII": -1, "IZI": -0.5, "IIZ": -0.25, "III": 2,
}
# phi * sqrt(omega)
HO_PHI = {
    "ZZX": (S2 - S6 - S10 + S14) / 8, "ZYY": (2 - 2 * S3) / 8, "ZXX": (2 - 2 * S3) / 8,
    "YYX": 1 / (2 * S2), "YXY": 1 / (2 * S2), "XYY": -1 / (2 * S2), "XXX": 1 / (2 * S2),
    "ZIX": (S2 + S6 - S10 - S14) / 8, "IZX": (S2 - S6 + S10 - S14) / 8,
    "IYY": (2 + 2 * S3) / 8, "IXX": (2 + 2 * S3) / 8, "IIX": (S2 + S6 + S10 + S14) / 8,
}

# resource tables: basis -> {n_q: (k-body counts, CNOTs)}
TABLE_1 = {
    "jlp": {2: ({0: 1, 1: 8, 2: 2}, 8), 3: ({0: 1, 1: 14, 2: 6}, 24), 4: ({0: 1, 1: 20, 2: 12}, 48),
            5: ({0: 1, 1: 26, 2: 20}, 80), 6: ({0: 1, 1: 32, 2: 30}, 120)},
    "ho_tuned": {n: ({0: 1, 1: n}, 0) for n in range(2, 7)},
    "ho_detuned": {
        2: ({0: 1, 1: 3, 2: 1}, 2), 3: ({0: 1, 1: 4, 2: 4, 3: 3}, 20),
        4: ({0: 1, 1: 5, 2: 5, 3: 11, 4: 7}, 96), 5: ({0: 1, 1: 6, 2: 6, 3: 16, 4: 26, 5: 15}, 352),
        6: ({0: 1, 1: 7, 2: 7, 3: 22, 4: 42, 5: 57, 6: 31}, 1120)},
}
TABLE_2 = {
    "jlp": {2: ({0: 1, 1: 8, 2: 2}, 8), 3: ({0: 1, 1: 14, 2: 6}, 24), 4: ({0: 1, 1: 20, 2: 12, 4: 1}, 54),
            5: ({0: 1, 1: 26, 2: 20, 4: 5}, 110), 6: ({0: 1, 1: 32, 2: 30, 4: 15}, 210)},
    "ho": {2: ({0: 1, 1: 3, 2: 2}, 4), 3: ({0: 1, 1: 5, 2: 9, 3: 4}, 34),
           4: ({0: 1, 1: 6, 2: 16, 3: 18, 4: 10}, 164), 5: ({0: 1, 1: 7, 2: 22, 3: 32, 4: 44, 5: 22}, 612),
           6: ({0: 1, 1: 8, 2: 29, 3: 44, 4: 84, 5: 98, 6: 46}, 1982)},
}
TABLE_3 = {
    "jlp": {n: ({2: n * n}, 2 * n * n) for n in range(2, 7)},
    "ho": {2: ({2: 1, 3: 6, 4: 9}, 80), 3: ({2: 1, 3: 8, 4: 30, 5: 56, 6: 49}, 1152),
           4: ({2: 1, 3: 10, 4: 47, 5: 140, 6: 271, 7: 330, 8: 225}, 11264),
           5: ({2: 1, 3: 12, 4: 68, 5: 244, 6: 630, 7: 1204, 8: 1668, 9: 1612, 10: 961}, 89600),
           6: ({2: 1, 3: 14, 4: 93, 5: 392, 6: 1186, 7: 2772, 8: 5154, 9: 7560, 10: 8541, 11: 7182,
                12: 3969}, 626688)},
}
TABLES = {1: TABLE_1, 2: TABLE_2, 3: TABLE_3}

# lowest two energies
E_QUARTIC = (0.85974269044550902, 2.94936376700996890)
E_DOUBLE_WELL_MU2 = -22.596382373935095
E_TWO_SITE = (2.12423312343879, 4.14178896487443)
