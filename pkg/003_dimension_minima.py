import cmath
import math

from dotenv import load_dotenv

from posreal import (
    classify,
    find_certificate,
    from_zeros_poles,
    load_config,
    minimal_markov_dimension,
    normalize_dominant_pole,
)
from posreal.theory import karpelevic_lower_bound, third_order_lower_bound

load_dotenv()


def build_system(r: float, theta: float, dominant: float = 1.0):
    """Sistema de tercer orden con polo dominante real y un par complejo r·exp(±iθ)."""
    p = r * cmath.exp(1j * theta)
    return from_zeros_poles([], [dominant, p, p.conjugate()], 1.0)


def main():
    config = load_config()

    # Polo dominante en 2: primero se normaliza a 1
    h = build_system(1.6, 1.0, dominant=2.0)
    g, scale = normalize_dominant_pole(h, config)
    info = classify(g, config)

    print(f"\n{'='*50}")
    print("Búsqueda de la dimensión mínima")
    print(f"{'='*50}")
    print(f"Escala p1 = {scale}")
    print(f"¿En M? {info.in_M}  |  polos positivos: {info.positive_pole_count}")
    print(f"Cota inferior (vértices): {karpelevic_lower_bound(g, config)}")
    print(f"Cota inferior (tercer orden): {third_order_lower_bound(g, config)}")

    print("-" * 30)
    for N in range(3, 8):
        cert = find_certificate(g, N, config)
        print(f"N = {N}: {'factible' if cert is not None else 'infactible'}")

    found = minimal_markov_dimension(g, n_max=64, config=config)
    if found is None:
        print("Ningún N <= 64 es factible")
        return
    N, cert = found
    print("-" * 30)
    print(f"Dimensión mínima: {N} (θ = 1 rad, ⌈π/θ⌉ + 1 = {math.ceil(math.pi / 1.0) + 1})")


if __name__ == "__main__":
    main()
