"""Cross-check the closed-form beam model against the brute-force solver.

The finite-difference solver knows nothing about the closed forms, so
agreement on tip deflection and anchor moment, plus a second-order
convergence rate, validates both sides.
"""

from memsmag import default_scenario, oracle_check


def main():
    for kind in ("lorentz", "ferro"):
        checks = oracle_check(default_scenario(kind))
        print(f"{kind} suspension beam:")
        print(
            f"  tip deflection   analytic {checks['tip_deflection_analytic_m']:.6e} m,"
            f" solver {checks['tip_deflection_fd_m']:.6e} m"
            f" ({checks['tip_deflection_rel_error'] * 100:.4f}% apart)"
        )
        print(
            f"  anchor moment    analytic {checks['anchor_moment_analytic_N_m']:.6e} N*m,"
            f" solver {checks['anchor_moment_fd_N_m']:.6e} N*m"
            f" ({checks['anchor_moment_rel_error'] * 100:.4f}% apart)"
        )
        print(f"  convergence order {checks['convergence_order']:.3f}")
        print(f"  {'PASS' if checks['passed'] else 'FAIL'}")
        print()


if __name__ == "__main__":
    main()
