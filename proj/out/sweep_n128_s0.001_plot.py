#!/usr/bin/env python3
import matplotlib.pyplot as plt
import csv

rows = list(csv.DictReader(open("out/sweep_n128_s0.001.csv")))
schemes = sorted({r["scheme"] for r in rows})
for s in schemes:
    pts = [(int(r["b_adc"]), r["csnr_db_theory"], r["csnr_db_empirical"])
           for r in rows if r["scheme"] == s]
    bs = [p[0] for p in pts]
    th = [float(p[1]) if p[1] != "inf" else None for p in pts]
    em = [float(p[2]) if p[2] != "inf" else None for p in pts]
    plt.plot(bs, th, "--", label=s + " theory")
    plt.plot(bs, em, "o-", label=s + " simulated")
plt.xlabel("ADC precision [b]"); plt.ylabel("CSNR [dB]")
plt.legend()
plt.tight_layout()
plt.show()
