"""Regenerate the FCIDUMP fixtures under fixtures/ with PySCF.

Each fixture is an active-space Hamiltonian (frozen-core CASCI integrals) small
enough for dense diagonalization. The CASCI energy PySCF reports for the same
active space is written to fixtures/reference_energies.csv as an external
cross-check.

    pip install pyscf
    python scripts/make_fixtures.py
"""

import os

from pyscf import gto, scf, mcscf
from pyscf.tools import fcidump

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "fixtures")


def chain(n, r):
    return [("H", (0.0, 0.0, i * r)) for i in range(n)]


def n2(r):
    return [("N", (0.0, 0.0, 0.0)), ("N", (0.0, 0.0, r))]


def write(name, atoms, basis, ncas, nelecas):
    mol = gto.M(atom=atoms, basis=basis, unit="Angstrom", verbose=0, symmetry=False)
    mf = scf.RHF(mol)
    mf.conv_tol = 1e-12
    mf.kernel()
    mc = mcscf.CASCI(mf, ncas, nelecas)
    mc.fcisolver.conv_tol = 1e-12
    e_cas = mc.kernel()[0]
    h1, ecore = mc.get_h1eff()
    h2 = mc.get_h2eff()
    path = os.path.join(OUT, name + ".fcidump")
    fcidump.from_integrals(path, h1, h2, ncas, nelecas, nuc=ecore, ms=0, tol=1e-14)
    return name, e_cas


def main():
    os.makedirs(OUT, exist_ok=True)
    rows = [
        write("h2_sto3g_0.74", chain(2, 0.74), "sto-3g", 2, 2),
        write("h4_chain_sto3g_1.50", chain(4, 1.50), "sto-3g", 4, 4),
        write("h6_chain_sto3g_1.00", chain(6, 1.00), "sto-3g", 6, 6),
        write("h6_chain_sto3g_2.00", chain(6, 2.00), "sto-3g", 6, 6),
    ]
    for r in (0.90, 1.10, 1.50, 2.00, 3.00):
        rows.append(write("n2_cas66_sto3g_%.2f" % r, n2(r), "sto-3g", 6, 6))
    with open(os.path.join(OUT, "reference_energies.csv"), "w") as f:
        f.write("fixture,casci_energy_ha\n")
        for name, e in rows:
            f.write("%s,%.12f\n" % (name, e))


if __name__ == "__main__":
    main()
