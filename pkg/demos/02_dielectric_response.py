"""
Normal-direction response of a quantized film
=============================================

In the plane the film answers like a free-electron plasma.  Along the
normal, transitions between sub-bands replace the free response with a sum
of oscillators, so eps_zz stays finite at zero frequency.
"""

# %%
import numpy as np

from filmcasimir import build_transition_table, eps_xx_imag, eps_zz_imag, eps_zz_static, well_from_reduced_width

well = well_from_reduced_width(omega_p=1e15, m_F=3.7)
table = build_transition_table(well)
wp = np.sqrt(table.omega_p_sq)
print(f"{len(table)} oscillators, truncation n' <= {table.n_trunc}")
print(f"oscillator strengths add up to omega_p^2 within {table.sum_rule_residual:.1e}")
print("per sub-band TRK residuals:", np.array2string(table.trk_residuals(), precision=2))

# %%
# Along the imaginary axis both components fall to one; eps_zz never
# exceeds eps_xx and approaches the closed-form static value as xi -> 0.
xi = np.geomspace(1e-4, 1e2, 7) * wp
for x, a, b in zip(xi / wp, eps_xx_imag(xi, wp), eps_zz_imag(xi, table)):
    print(f"xi/omega_p = {x:8.1e}   eps_xx = {a:12.5e}   eps_zz = {b:10.5f}")
print(f"static closed form: {eps_zz_static(well):.5f}")
