"""Writes the format fixtures shared by the C++ tests and the plotting scripts.

The byte layouts are produced here independently of the library so the tests
catch format drift in either direction.
"""

import math
import pathlib
import struct

HERE = pathlib.Path(__file__).resolve().parent


def g17(v):
    return "%.17g" % v


def runlog():
    lines = ["step,time,energy,mass,l2,linf,hm1"]
    for step in range(4):
        t = step * 0.01
        energy = 1.0 / (1.0 + step)
        mass = 0.0
        l2 = 0.5 + 0.125 * step
        linf = 0.75 - 0.0625 * step
        hm1 = 0.1 / (2.0 + step)
        lines.append(",".join([str(step)] + [g17(v) for v in (t, energy, mass, l2, linf, hm1)]))
    return "\n".join(lines) + "\n"


def rates():
    taus = [0.005, 0.0025, 0.00125]
    errors = [4e-5, 2e-5, 5e-6]
    lines = ["tau,error_hm1,rate"]
    for k, (tau, err) in enumerate(zip(taus, errors)):
        rate = "" if k == 0 else g17(math.log2(errors[k - 1] / err))
        lines.append("%s,%s,%s" % (g17(tau), g17(err), rate))
    return "\n".join(lines) + "\n"


def fit():
    return "m_e,b_e,t_min,t_max,residual,points\n" + ",".join(
        [g17(-0.314), g17(21.08), g17(0.1), g17(1.0), g17(0.0), "12"]) + "\n"


def snapshot():
    n = (4, 6)
    half_width = (1.0, 1.5)
    out = b"NCHS" + struct.pack("<II", 1, len(n))
    out += struct.pack("<%dI" % len(n), *n)
    out += struct.pack("<%dd" % len(n), *half_width)
    out += struct.pack("<d", 0.5)
    values = [0.25 * i - 1.0 for i in range(n[0] * n[1])]
    out += struct.pack("<%dd" % len(values), *values)
    return out


if __name__ == "__main__":
    (HERE / "runlog.csv").write_text(runlog())
    (HERE / "rates.csv").write_text(rates())
    (HERE / "fit.csv").write_text(fit())
    (HERE / "snapshot_2d.nchs").write_bytes(snapshot())
