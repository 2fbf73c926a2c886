"""
Convergence certificate
=======================

The constants ``tau``, ``M``, ``C = delta*M`` and ``theta0 = (3/c)(delta*M)^3``
for ``c = 1/2, delta = 0.8``, followed by the inequality checks on the
generated coefficients.
"""

from lightlike_zmc import certify as cert

tau = cert.compute_tau()
print(f"tau = {tau:.6f}  (g(1/7) = {cert.tau_function(1 / 7):.6f})")

report = cert.certify("1/2", 0.8, order=20)
print(f"M = {report.M:.3f}, C = {report.C:.3f}, theta0 = {report.theta0:.4e}")
print(f"series converges for |x| <= {report.certified_x_radius:.5f}, |y| <= 0.8")
for name, ok in report.section_passed().items():
    print(f"  {name:20s} {'pass' if ok else 'FAIL'}")

###############################################################################
# Worst relative margin per order: the l = 3 row is tight by construction,
# higher orders sit far inside their bounds.

for row in report.per_k_results[:6]:
    print(row["l"], f"{row['worst_margin']:.6f}")

###############################################################################
# The two summation lemmas at a single index.

print(cert.check_lemma_sum_int(7, 0))
print(cert.check_lemma_sum_2(7, tau))
