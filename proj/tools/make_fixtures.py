#!/usr/bin/env python3
# Copyright 2026 The orbrot Authors
# SPDX-License-Identifier: Apache-2.0
"""Regenerate the molecular FCIDUMP fixtures under data/fixtures/.

Requires PySCF. Integrals are written in the canonical RHF (molecular orbital)
basis. Reference energies (RHF and FCI on the written integrals) are stored in
manifest.json next to the files. The C++ code never calls this script; the
outputs are committed.
"""
import hashlib
import json
import math
import os
import sys

import numpy as np
from pyscf import fci, gto, scf
from pyscf.tools import fcidump

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "data", "fixtures")
BASIS = "sto-6g"

# H4 on a circle of diameter 3.475953 Angstrom; gamma is the angle subtended
# by the short side of the rectangle at the centre.
H4_DIAGONAL = 3.475953
H4_ANGLES = [25, 70, 80, 85, 90, 95, 100, 110]
HF_BONDS = [1.00, 1.21, 1.46, 2.00, 2.73]
BH_BONDS = [1.00, 1.23, 1.60, 2.20]
H2_BOND = 0.735


def h4_geometry(gamma_deg):
    r = H4_DIAGONAL / 2.0
    half = math.radians(gamma_deg) / 2.0
    pts = [(r * math.cos(half), r * math.sin(half)),
           (r * math.cos(half), -r * math.sin(half)),
           (-r * math.cos(half), -r * math.sin(half)),
           (-r * math.cos(half), r * math.sin(half))]
    return [("H", (x, y, 0.0)) for x, y in pts]


def diatomic(a, b, bond):
    return [(a, (0.0, 0.0, 0.0)), (b, (0.0, 0.0, bond))]


def write_fixture(name, atoms, extra):
    mol = gto.M(atom=atoms, basis=BASIS, unit="Angstrom", spin=0,
                symmetry=False, verbose=0)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.max_cycle = 500
    mf.kernel()
    if not mf.converged:
        # Stretched bonds: fall back to a second-order solver.
        mf = scf.RHF(mol).newton()
        mf.conv_tol = 1e-12
        mf.max_cycle = 500
        mf.kernel()
    if not mf.converged:
        raise RuntimeError(f"RHF did not converge for {name}")
    path = os.path.join(OUT, name + ".fcidump")
    fcidump.from_scf(mf, path, tol=1e-15)

    # FCI on the integrals exactly as written, so the reference matches what
    # the parser sees.
    data = fcidump.read(path)
    norb, nelec = data["NORB"], data["NELEC"]
    ms2 = data.get("MS", 0)
    na = (nelec + ms2) // 2
    nb = nelec - na
    e_fci, _ = fci.direct_spin1.kernel(data["H1"], data["H2"], norb, (na, nb),
                                       ecore=data["ECORE"], tol=1e-13,
                                       conv_tol=1e-13, max_cycle=500,
                                       nroots=1)
    with open(path, "rb") as fh:
        digest = hashlib.sha256(fh.read()).hexdigest()
    entry = {
        "file": name + ".fcidump",
        "basis": BASIS,
        "norb": int(norb),
        "nelec": int(nelec),
        "ms2": int(ms2),
        "e_hf": float(mf.e_tot),
        "e_fci": float(e_fci),
        "e_nuc": float(mol.energy_nuc()),
        "geometry_angstrom": [[a, list(map(float, xyz))] for a, xyz in atoms],
        "sha256": digest,
    }
    entry.update(extra)
    return entry


def main():
    os.makedirs(OUT, exist_ok=True)
    manifest = {"generator": "tools/make_fixtures.py",
                "pyscf_basis": BASIS, "fixtures": {}}
    fx = manifest["fixtures"]
    fx["h2_0.735"] = write_fixture("h2_0.735", diatomic("H", "H", H2_BOND),
                                   {"system": "H2", "bond": H2_BOND})
    for g in H4_ANGLES:
        key = f"h4_gamma{g:03d}"
        fx[key] = write_fixture(key, h4_geometry(g),
                                {"system": "H4", "gamma_deg": g})
    for r in HF_BONDS:
        key = f"hf_{r:.2f}"
        fx[key] = write_fixture(key, diatomic("H", "F", r),
                                {"system": "HF", "bond": r})
    for r in BH_BONDS:
        key = f"bh_{r:.2f}"
        fx[key] = write_fixture(key, diatomic("B", "H", r),
                                {"system": "BH", "bond": r})
    with open(os.path.join(OUT, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for k, v in sorted(fx.items()):
        print(f"{k:16s} norb={v['norb']} nelec={v['nelec']} "
              f"E_HF={v['e_hf']:.10f} E_FCI={v['e_fci']:.10f}")


if __name__ == "__main__":
    sys.exit(main())
