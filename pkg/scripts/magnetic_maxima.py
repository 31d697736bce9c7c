"""Tabulate the field-induced QFI maxima on the sphere and cylinder.

For each coupling a, compares the reference closed forms with the QFI of the
normalized perturbed states and a finite-difference oracle.
"""
import argparse
import math

from curvprobe.magnetic import (
    cylinder_field_qfi,
    cylinder_field_qfi_argmax,
    cylinder_field_qfi_derived,
    cylinder_perturbed_state,
    numeric_argmax,
    perturbed_qfi_numeric,
    sphere_ground_qfi_argmax,
    sphere_ground_qfi_derived,
    sphere_ground_qfi_printed,
    sphere_ground_state,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--a", type=float, nargs="+", default=[0.1, 1.0, 10.0])
    args = ap.parse_args()

    print("sphere ground state, g(lam) = a lam^4")
    print(f"{'a':>6} {'lam*':>10} {'numeric lam*':>13} {'printed max':>12} {'2.4 sqrt a':>11} {'derived max':>12} {'FD':>12}")
    for a in args.a:
        lam = sphere_ground_qfi_argmax(a)
        num_lam = numeric_argmax(lambda x: sphere_ground_qfi_derived(a, x), 0.1 * lam, 5 * lam)
        field = math.sqrt(a * 36 * math.sqrt(5))
        fd = perturbed_qfi_numeric(lambda x: sphere_ground_state(1.0, field, x), lam).value
        print(f"{a:>6g} {lam:>10.6f} {num_lam:>13.6f} {sphere_ground_qfi_printed(a, lam):>12.6f} "
              f"{2.4 * math.sqrt(a):>11.6f} {sphere_ground_qfi_derived(a, lam):>12.6f} {fd:>12.6f}")

    print("\ncylinder (k=1, m=0), radial field a = Q B1 / hbar")
    print(f"{'a':>6} {'lam*':>10} {'printed max':>12} {'24(2a)^2/3':>11} {'normalized':>12} {'FD':>12}")
    for a in args.a:
        lam = cylinder_field_qfi_argmax(a)
        fd = perturbed_qfi_numeric(lambda x: cylinder_perturbed_state(1.0, 0, a, 1.0, x), lam).value
        print(f"{a:>6g} {lam:>10.6f} {cylinder_field_qfi(1.0, 0, a, 1.0, lam):>12.6f} {24 * (2 * a) ** (2 / 3):>11.6f} "
              f"{cylinder_field_qfi_derived(1.0, 0, a, 1.0, lam):>12.6f} {fd:>12.6f}")


if __name__ == "__main__":
    main()
