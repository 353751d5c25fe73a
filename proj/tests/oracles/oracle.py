"""Reference values for the test suite, computed independently of the C++ code.

Writes tests/data/numbers_oracle.csv (dimensionless groups of every built-in
case, 30-digit arithmetic) and tests/data/scalar_oracle.csv (single values
used by individual tests). Rerun after changing the alloy or case tables:

    python3 tests/oracles/oracle.py
"""

import csv
import math
from pathlib import Path

import mpmath as mp
from scipy import integrate

mp.mp.dps = 30
OUT = Path(__file__).resolve().parents[1] / "data"

# name: rho, c, k, mu, dgamma/dT, beta, kappa, L, T_s, T_l
ALLOYS = {
    "SS316": ("7800", "490", "36.5", "7.0e-3", "-4.00e-4", "5.85e-5", "5.56e-13", "2.72e5", "1693", "1733"),
    "Ti6Al4V": ("4000", "570", "7.3", "4.0e-3", "-2.63e-3", "2.50e-5", "5.56e-13", "2.84e5", "1878", "1928"),
    "IN718": ("8100", "435", "11.4", "5.0e-3", "-3.70e-3", "4.8e-5", "5.56e-13", "2.09e5", "1533", "1609"),
    "AlSi10Mg": ("2670", "890", "173.0", "1.3e-3", "-3.5e-4", "2.4e-5", "5.56e-13", "4.23e5", "831", "867"),
    "AZ91D": ("1675", "1122", "77.5", "3.0e-3", "-2.13e-4", "9.54e-5", "5.56e-13", "3.73e5", "743", "868"),
}

CASES = {
    "SS316": [(70, .3), (80, .4), (90, .5), (100, .6), (110, .7), (110, .8), (110, .9), (110, 1.0),
              (65, .5), (75, .5), (85, .5), (95, .5)],
    "Ti6Al4V": [(15, .2), (25, .5), (35, .7), (45, .9), (40, .6), (40, .7), (40, .8), (40, 1.0),
                (35, .9), (40, .9), (45, .9), (50, .9)],
    "IN718": [(20, .15), (30, .25), (40, .45), (50, .75), (45, .8), (45, .9), (45, 1.0), (45, 1.1),
              (53, .95), (55, .95), (58, .95), (60, .95)],
    "AlSi10Mg": [(75, .35), (85, .45), (95, .55), (105, .65), (100, .6), (100, .7), (100, .8), (100, .9),
                 (90, 1.1), (95, 1.1), (100, 1.1), (110, 1.1)],
    "AZ91D": [(35, .25), (40, .3), (45, .35), (50, .45), (40, .3), (40, .4), (40, .5), (40, .6),
              (40, .6), (50, .6), (60, .6), (70, .6)],
}

L_P = mp.mpf("2e-5")
D_PHI = L_P
T_INF = mp.mpf("301.15")
H_CONV = mp.mpf(10)
SIGMA = mp.mpf("5.67e-8")
G = mp.mpf("9.81")

FIELDS = ["Pr", "Gr", "Ra", "Da", "Ma", "Pe", "Ste", "Q", "E", "Bi", "rad_measure", "Tc", "Tc_over_Ste"]


def numbers(alloy, power, speed):
    rho, c, k, mu, dg, beta, kappa, lat, ts, tl = (mp.mpf(x) for x in ALLOYS[alloy])
    p, v = mp.mpf(str(power)), mp.mpf(str(speed))
    alpha = k / (rho * c)
    nu = mu / rho
    dT = tl - T_INF
    n = {
        "Pr": nu / alpha,
        "Gr": G * L_P**3 * beta * dT / nu**2,
        "Da": kappa / D_PHI**2,
        "Ma": abs(dg) * L_P * dT / (mu * alpha),
        "Pe": L_P * v / alpha,
        "Ste": c * (tl - ts) / lat,
        "Q": p / (rho * c * dT * v * L_P**2),
        "E": p / (k * dT * L_P),
        "Bi": H_CONV * L_P / k,
        "rad_measure": SIGMA * dT**3 / (rho * c * v),
        "Tc": (tl - ts) / dT,
    }
    n["Ra"] = n["Gr"] * n["Pr"]
    n["Tc_over_Ste"] = n["Tc"] / n["Ste"]
    return n, alpha


def write_numbers():
    with open(OUT / "numbers_oracle.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["alloy", "P_W", "v_p"] + FIELDS)
        for alloy, pairs in CASES.items():
            for p, v in pairs:
                n, _ = numbers(alloy, p, v)
                w.writerow([alloy, p, v] + [mp.nstr(n[f], 20) for f in FIELDS])


def gaussian_factor(f=2.0, radius=5.0):
    # Volume integral of exp(-f r^2/R^2) exp(-f z^2) over the half-space,
    # divided by its lateral normalisation pi R^2 / f (depth scale 1).
    lim = 8.0 * radius
    val, _ = integrate.tplquad(
        lambda z, y, x: math.exp(-f * (x * x + y * y) / radius**2 - f * z * z),
        -lim, lim, lambda x: -lim, lambda x: lim, lambda x, y: 0.0, lambda x, y: 8.0,
        epsabs=1e-12, epsrel=1e-12)
    return val / (math.pi * radius**2 / f)


def write_scalars():
    n, alpha = numbers("SS316", 90, 0.5)
    ss = ALLOYS["SS316"]
    ts, tl = mp.mpf(ss[8]), mp.mpf(ss[9])
    uhat = mp.mpf("0.8146") + mp.mpf("0.0082") * n["E"] - mp.mpf("0.1654") * n["Pe"]
    xi = mp.mpf(1)  # lambda = 1, T = T_m + (T_l - T_s)
    rows = {
        "ss316_alpha": alpha,
        "ss316_pe": n["Pe"],
        "ss316_ste": n["Ste"],
        "ss316_e": n["E"],
        "ss316_tc": n["Tc"],
        "ss316_preheat_scaled": (mp.mpf(353) - T_INF) / (tl - T_INF),
        "ss316_uhat_default": uhat,
        "ss316_ste_uhat_over_tc": n["Ste"] * uhat / n["Tc"],
        "ss316_ma_uhat": n["Ma"] * uhat,
        "phase_fraction_xi1": mp.e**xi / (mp.e**xi + mp.e**(-xi)),
        "sdas_1e6": 25 * mp.power(mp.mpf(10) ** 6, mp.mpf("-0.28")),
        "gaussian_half_space_f2": mp.mpf(gaussian_factor()),
    }
    with open(OUT / "scalar_oracle.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["name", "value"])
        for k, v in rows.items():
            w.writerow([k, mp.nstr(v, 20)])


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    write_numbers()
    write_scalars()
