"""
Electrons in a thin film
========================

A slab of positive background of thickness D holds N0 electrons per unit
volume.  Confined between infinite walls a distance d apart, the electrons
fill sub-bands E_n = (hbar pi n / d)^2 / 2m up to the bulk Fermi energy, and
charge neutrality fixes d slightly above D.
"""

# %%
import numpy as np

from filmcasimir import FilmSpec, g_factor, solve_effective_width, units

spec = FilmSpec.from_plasma_frequency(D_nm=5.0, omega_p=1e16)
well = solve_effective_width(spec)
print(f"D = {spec.D_nm:.3f} nm  ->  d = {well.d_nm:.4f} nm, m_F = k_F d / pi = {well.m_F:.4f}")
print("occupied sub-bands (eV):", np.round([units.energy_to_ev(e) for e in well.energies[: well.m_0]], 4))
print(f"E_F = {units.energy_to_ev(spec.E_F):.4f} eV")

# %%
# For thick films the spill-out d - D settles at 3 pi / (4 k_F).
for D in (10.0, 50.0, 200.0, 1000.0):
    s = FilmSpec.from_plasma_frequency(D, 1e16)
    w = solve_effective_width(s)
    print(f"D = {D:7.1f} nm   (d - D) k_F / (3 pi / 4) = {(w.d - s.D) * s.k_F / (0.75 * np.pi):.5f}")

# %%
# N/N0 as a function of the reduced width has a slope jump each time a new
# sub-band crosses the Fermi level, at every integer m_F.
m = np.array([1.9, 1.99, 2.0, 2.01, 2.1, 2.9, 3.0, 3.1])
for mi in m:
    print(f"m_F = {mi:5.2f}   N/N0 = {g_factor(mi):.6f}")
