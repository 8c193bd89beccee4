"""
Fluctuation force between two quantized films
=============================================

Two identical films face each other across a vacuum gap.  The force from
the anisotropic quantized response, F_Q, is set against an isotropic plasma
slab of the same thickness, F_P, and against ideal mirrors, F_CAS.
"""

# %%
from filmcasimir import FilmSpec, compare

r = compare(FilmSpec.from_plasma_frequency(5.0, 1e15), ell_nm=50.0)
print(f"F_Q = {r.F_Q_pa:.4e} Pa   F_P = {r.F_P_pa:.4e} Pa   F_CAS = {r.F_CAS_pa:.4e} Pa")
print(f"eta_Q = {r.eta_Q:.4f}   eta_P = {r.eta_P:.4f}   delta = {r.delta:.4f}")

# %%
# Thin films lose a sizeable fraction of the plasma-model force; thick
# metallic films recover it.
for D in (1.0, 2.0, 5.0, 20.0, 100.0):
    r = compare(FilmSpec.from_plasma_frequency(D, 1e16 if D > 20 else 1e14), ell_nm=10.0)
    print(f"D = {D:6.1f} nm   m_F = {r.well.m_F:7.3f}   delta = {r.delta:.4f}")

# %%
# Presets reproduce whole curves; see ``filmcasimir figure --help``.
from filmcasimir.sweep import figure_preset, run_sweep

(spec,) = figure_preset("fig6")
table = run_sweep(spec)
for ell, delta in zip(table.column("ell_nm")[::5], table.column("delta")[::5]):
    print(f"ell = {ell:9.1f} nm   delta = {delta:.4f}")
