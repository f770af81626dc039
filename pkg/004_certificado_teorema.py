from dotenv import load_dotenv

from posreal import (
    RationalPoleAngles,
    check_divisibility_condition,
    from_zeros_poles,
    load_config,
    theorem_certificate,
)
from posreal.poly import Polynomial, conv

load_dotenv()


def main():
    config = load_config()

    # Polos 1, 0.9·exp(±i2π/3) y 0.5·exp(±i2π/5): m = (1, 3, 5)
    angles = RationalPoleAngles(((1.0, 0, 1), (0.9, 1, 3), (0.5, 1, 5)))
    a_hat = angles.a_hat(config.conj_tol)
    a = conv(Polynomial([1.0, -1.0]), a_hat)

    print(f"\n{'='*50}")
    print("Certificado constructivo con ángulos racionales")
    print(f"{'='*50}")
    print(f"Denominadores m: {angles.denominators}")
    print(f"μ: {angles.mu}")
    print(f"¿m_k no divide a m_1···m_(k-1)? {check_divisibility_condition(angles)}")

    cert = theorem_certificate(angles, a_hat)
    aq = cert.feasibility_certificate().convolution(a)

    print("-" * 30)
    print(f"N = {cert.N}")
    print(f"Ω (primeros 8): {cert.omega.to_list()[:8]}")
    print(f"¿Ω no negativo y no creciente? {cert.is_nonneg_nonincreasing(1e-12)}")
    print(f"max (a*q)_t = {aq.max():.3e}  (debe ser <= 0)")

    h = from_zeros_poles([], [1.0] + angles.poles(), 1.0, config)
    print(f"Orden del sistema: {h.order}  |  dimensión certificada: {cert.N}")


if __name__ == "__main__":
    main()
