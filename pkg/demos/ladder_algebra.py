"""The exponential ladder algebra behind the holomorphic family.

Conjugating the lowering shift U = e^{-i phi} with the Gaussian smoothing
e^{-eps L^2/2} produces B with B e_n = e^{eps(n + delta - 1/2)} e_{n-1};
the holomorphic states are its eigenvectors, the quadratures K = B + Bdag
and J = i(Bdag - B) are exactly saturated on them, and the rescaled pair
satisfies A Adag - q Adag A = q^{-N} with q = e^{-2 eps}.
Run: python demos/ladder_algebra.py
"""


from circleqm.circlespace import Sector, basis_state
from circleqm.ladder import (
    LadderContext,
    apply_B,
    apply_Bdag,
    eigen_residual,
    kj_matrix_elements,
    kj_report,
    qdeform_residual,
)
from circleqm.zakcs import PhasePoint

ctx = LadderContext(epsilon=1.0, sector=Sector(0.0))
print(f"deformation parameter q = e^(-2 eps) = {ctx.q_def:.6f}")
print(f"number-operator shift (1/2 eps) ln(2 sinh eps) = "
      f"{ctx.shift_constant:.6f}\n")

e0 = basis_state(0, Sector(0.0))
lowered = apply_B(ctx, e0)
raised = apply_Bdag(ctx, e0)
print(f"B e_0 = {lowered.coeffs[0]:.6f} e_({lowered.n_lo})")
print(f"Bdag e_0 = {raised.coeffs[0]:.6f} e_({raised.n_lo})\n")

print("holomorphic states are eigenvectors of B (residual on the window):")
for z in (0j, 1.0 + 0.5j, 2.0j):
    print(f"  z = {z}: residual {eigen_residual(ctx, PhasePoint.from_z(z)):.2e}")

print("\nquadrature pair statistics at z = 1 + 0.5i:")
rep = kj_report(ctx, PhasePoint.from_z(1.0 + 0.5j))
mat = kj_matrix_elements(ctx, PhasePoint.from_z(1.0 + 0.5j))
print(f"  closed form:      <K> = {rep.mean_k:+.8f}, var K = {rep.var_k:.8f}")
print(f"  matrix elements:  <K> = {mat.mean_k:+.8f}, var K = {mat.var_k:.8f}")
print(f"  saturation (var K var J = |<[K,J]>|^2/4): {rep.saturated}")
print(f"  labels recovered: theta = {rep.theta_recovered:.6f}, "
      f"l = {rep.l_recovered:.6f}\n")

print("q-deformed oscillator identity on the eigenbasis:")
for n in (-2, 0, 3):
    print(f"  n = {n:+d}: residual {qdeform_residual(ctx, n):.2e}")

delta = 1.0 - ctx.shift_constant
ctx_tuned = LadderContext(1.0, Sector(delta))
print(f"\nchoosing delta = 1 - shift = {delta:.6f} makes the ground-level "
      f"number expectation the integer "
      f"{0 + delta + ctx_tuned.shift_constant:.1f}")
