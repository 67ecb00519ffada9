#!/usr/bin/env python3
import matplotlib.pyplot as plt
import csv

rows = list(csv.DictReader(open("out/surface_n128_b5.csv")))
t1 = sorted({float(r["t1_volts"]) for r in rows})
tm = sorted({float(r["tM_volts"]) for r in rows})
import numpy as np
z = np.full((len(t1), len(tm)), np.nan)
i1 = {v: i for i, v in enumerate(t1)}
i2 = {v: i for i, v in enumerate(tm)}
for r in rows:
    v = r["csnr_db"]
    if v != "inf":
        z[i1[float(r["t1_volts"])], i2[float(r["tM_volts"])]] = float(v)
plt.pcolormesh(tm, t1, z, shading="nearest")
plt.xlabel("t_M [V]"); plt.ylabel("t_1 [V]")
plt.colorbar(label="CSNR [dB]")
plt.tight_layout()
plt.show()
