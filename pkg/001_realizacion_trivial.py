from dotenv import load_dotenv

from posreal import (
    find_certificate,
    from_coefficients,
    load_config,
    realize,
    verify_realization,
)

load_dotenv()


def main():
    config = load_config()

    # H(z) = 1/(z - 1): un integrador, el caso más simple de la clase M
    h = from_coefficients([1.0], [1.0, -1.0], config)

    cert = find_certificate(h, 1, config)
    ss = realize(h, cert, config)

    print(f"\n{'='*50}")
    print("Realización de Markov de 1/(z - 1)")
    print(f"{'='*50}")
    print(f"A = {ss.A.tolist()}")
    print(f"B = {ss.B.tolist()}")
    print(f"C = {ss.C.tolist()}")
    print("-" * 30)
    print(f"Parámetros de Markov: {ss.markov_parameters(6).tolist()}")
    print(f"¿Reproduce H? {verify_realization(ss, h, horizon=10)}")


if __name__ == "__main__":
    main()
