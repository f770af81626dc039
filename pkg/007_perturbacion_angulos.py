import math

from dotenv import load_dotenv

from posreal import check_divisibility_condition, load_config, perturb_to_rational

load_dotenv()


def main():
    load_config()

    # Ángulos de la forma 2π/m que violan la condición: m_3 = 3 divide a m_2 = 6
    thetas = [0.0, 2 * math.pi / 6, 2 * math.pi / 3]
    magnitudes = [1.0, 0.8, 0.6]

    print(f"\n{'='*50}")
    print("Perturbación a ángulos racionales")
    print(f"{'='*50}")
    for eps in (1e-1, 1e-2, 1e-3):
        angles = perturb_to_rational(thetas, magnitudes, eps)
        errors = [abs(e.angle - t) for e, t in zip(angles.entries[1:], thetas[1:])]
        print("-" * 30)
        print(f"ε = {eps}")
        print(f"   (l, m): {[(e.l, e.m) for e in angles.entries[1:]]}")
        print(f"   error máximo: {max(errors):.2e}")
        print(f"   N = ∏ m = {math.prod(angles.denominators)}")
        print(f"   ¿Cumple la condición? {check_divisibility_condition(angles)}")


if __name__ == "__main__":
    main()
