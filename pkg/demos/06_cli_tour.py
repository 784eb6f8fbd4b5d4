"""
Command-line tour
=================

The ``zonalprop`` command writes CSV or JSON tables.  Exit status 0 means
every comparison met its tolerance, 1 means one did not, 2 is a usage or
domain error.
"""

import subprocess
import sys


def zp(*args):
    proc = subprocess.run([sys.executable, "-m", "zonalprop", *args], capture_output=True, text=True)
    print("$ zonalprop", " ".join(args), f"  [exit {proc.returncode}]")
    print(proc.stdout or proc.stderr)


zp("hyperbolic", "--d", "3", "--beta", "1", "--theta", "0:3:1", "--method", "both")
zp("oscillator", "spectrum", "--d", "3", "--n", "0..5")
zp("oscillator", "radial", "--d", "3", "--l", "0", "--beta", "0.7", "--grid", "0.5,1.5")
zp("converge", "--scenario", "hyperbolic-coeff", "--N", "1e2,1e3,1e4")
zp("check", "limit47", "--N", "10000", "--format", "json")
zp("hyperbolic", "--d", "4", "--method", "odd")
