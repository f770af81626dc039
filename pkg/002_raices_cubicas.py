from dotenv import load_dotenv

from posreal import (
    certify_exact_minimality,
    from_coefficients,
    load_config,
    minimal_markov_dimension,
    realize,
)

load_dotenv()


def main():
    config = load_config()

    # H(z) = 1/(z^3 - 1): polos en las raíces cúbicas de la unidad
    h = from_coefficients([1.0], [1.0, 0.0, 0.0, -1.0], config)

    N, cert = minimal_markov_dimension(h, config=config)
    ss = realize(h, cert, config)

    print(f"\n{'='*50}")
    print("Raíces cúbicas de la unidad")
    print(f"{'='*50}")
    print(f"Dimensión mínima N = {N}")
    print(f"Multiplicador q = {cert.q.to_list()}")
    print("A (permutación cíclica):")
    for row in ss.A.tolist():
        print(f"   {row}")
    print("-" * 30)
    print(f"¿Mínima certificada? {certify_exact_minimality(h, N, config)}")


if __name__ == "__main__":
    main()
