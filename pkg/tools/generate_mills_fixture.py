#!/usr/bin/env python3
"""Regenerate the extended-precision Mill's-ratio oracle fixture.

Writes tests/fixtures/mills_oracle.npz with two point sets:
  * x_low/m_low:   1e5 log-spaced points on [0, 600]
  * x_high/m_high: 2e4 log-spaced points on [600, 2000]

Oracle values come from mpmath at 60 significant digits (x^2/2 stays below
2e6 on these ranges, so 60 digits leaves >50 correct figures) and are then
rounded once to double. Run from the repository root:

    python tools/generate_mills_fixture.py
"""

import pathlib

import mpmath as mp
import numpy as np

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "mills_oracle.npz"


def mills_exact(x):
    xm = mp.mpf(float(x))
    return mp.sqrt(mp.pi / 2) * mp.erfc(xm / mp.sqrt(2)) * mp.e ** (xm * xm / 2)


def main():
    mp.mp.dps = 60
    x_low = np.concatenate([[0.0], np.logspace(-8, np.log10(600.0), 100_000 - 1)])
    x_high = np.logspace(np.log10(600.0), np.log10(2000.0), 20_000)
    m_low = np.array([float(mills_exact(x)) for x in x_low])
    m_high = np.array([float(mills_exact(x)) for x in x_high])
    OUT.parent.mkdir(parents=True, exist_ok=True)
    np.savez_compressed(OUT, x_low=x_low, m_low=m_low, x_high=x_high, m_high=m_high)
    print(f"wrote {OUT} ({OUT.stat().st_size / 1e6:.2f} MB)")

    # sanity: double-precision erfcx should agree with the fixture closely
    from scipy.special import erfcx

    ref = np.sqrt(np.pi / 2) * erfcx(x_low / np.sqrt(2))
    rel = np.max(np.abs(ref - m_low) / m_low)
    print(f"max rel diff vs scipy erfcx on [0,600]: {rel:.3e}")


if __name__ == "__main__":
    main()
