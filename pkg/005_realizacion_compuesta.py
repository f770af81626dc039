import json

from dotenv import load_dotenv

from posreal import (
    CompoundMode,
    compound_realize,
    from_zeros_poles,
    load_config,
    minimal_markov_dimension,
    normalize_dominant_pole,
    positive_poles,
)

load_dotenv()


def main():
    config = load_config()

    # Dos polos positivos: ninguna realización de Markov existe
    h = from_zeros_poles([], [1.0, 0.5, -0.4], 1.0, config)
    g, _ = normalize_dominant_pole(h, config)

    print(f"\n{'='*50}")
    print("Realización compuesta")
    print(f"{'='*50}")
    print(f"Polos positivos: {[p.real for p in positive_poles(g, config.axis_tol)]}")
    print(f"LP directo (hasta N=12): {minimal_markov_dimension(g, n_max=12, config=config)}")

    for modes in [(CompoundMode.SERIES,), (CompoundMode.PARALLEL,)]:
        result = compound_realize(h, config=config, modes=modes)
        print("-" * 30)
        if result is None:
            print(f"{modes[0].value}: sin descomposición válida")
            continue
        print(f"{modes[0].value}: dimensión {result.realization.dimension}")
        print(json.dumps(result.plan.to_json_dict(), indent=2))


if __name__ == "__main__":
    main()
