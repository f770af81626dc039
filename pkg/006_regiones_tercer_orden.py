import time

from dotenv import load_dotenv

from posreal import GridSpec, load_config, nesting_check, scan
from posreal.logging_setup import configure_logging
from posreal.regions import vertex_overlay

load_dotenv()


def main():
    config = load_config()
    configure_logging(config.log_level)

    grid = GridSpec(steps=41)
    scans = {}

    print(f"\n{'='*50}")
    print(f"Regiones de tercer orden en rejilla {grid.steps}x{grid.steps}")
    print(f"{'='*50}")
    for N in (3, 4, 5, 6):
        start = time.perf_counter()
        scans[N] = scan(N, grid, config, workers=config.workers)
        elapsed = time.perf_counter() - start
        print(f"N = {N}: {scans[N].feasible_count} celdas factibles ({elapsed:.1f}s)")

    print("-" * 30)
    for lo, hi in [(3, 4), (4, 5), (5, 6)]:
        print(f"región N={lo} ⊆ región N={hi}: {nesting_check(scans[lo], scans[hi])}")

    print("-" * 30)
    print("Vértices en el círculo unidad para N = 6:")
    for x, y, l, m in vertex_overlay(6):
        print(f"   exp(i2π·{l}/{m}) = ({x:+.4f}, {y:+.4f})")


if __name__ == "__main__":
    main()
