import argparse
import statistics
import time
from typing import Any, Callable, Dict, List

import numpy as np

from app.config.presets import PLANE_PRESETS
from app.core.config import settings
from app.models.torus import TorusMap
from app.models.vortex import SmoothPhase, Vortex, VortexConfig
from app.schemas.problem import BoundarySpec
from app.services.bounds_service import BoundsService
from app.services.energy_service import EnergyService
from app.services.grid_service import GridService
from app.services.map_service import MapService
from app.services.torus_service import TorusService


def single_vortex_energy(radial: int, angular: int) -> float:
    vortices = VortexConfig((Vortex(0j, 1),))
    singular_map = MapService.make_singular_map(vortices, SmoothPhase(), angular)
    grid = GridService.build_polar_grid(radial, angular, centers=(0j,))
    return EnergyService(grid).energy_of(singular_map).total


def plane_energy(preset: str) -> Callable[[int, int], float]:
    zeros = [complex(x, y) for x, y in PLANE_PRESETS[preset]["p"]]
    poles = [complex(x, y) for x, y in PLANE_PRESETS[preset]["q"]]

    def case(radial: int, angular: int) -> float:
        return EnergyService.plane_energy(zeros, poles, settings.PLANE_TRUNCATION_RADIUS, radial, angular)
    return case


def extension_bound(radial: int, angular: int) -> float:
    trace = BoundarySpec(preset="wobble", samples=angular).to_signal()
    bounds = BoundsService(GridService.build_polar_grid(radial, angular, centers=(0j,)))
    return bounds.extension_energy_bound(trace, 1).slack


def torus_winding(radial: int, angular: int) -> float:
    return TorusService().torus_energy(TorusMap(winding=(2, 1))).total


# Acceptance computations with their time limits in seconds (None: no limit)
BENCHMARK_CASES: Dict[str, Dict[str, Any]] = {
    "single_vortex": {"run": single_vortex_energy, "expected": 2 * np.pi * np.e / (np.e + 1), "limit": 5.0},
    "plane_q1": {"run": plane_energy("pair"), "expected": 2 * np.pi, "limit": 10.0},
    "plane_q2": {"run": plane_energy("double_pair"), "expected": 4 * np.pi, "limit": 10.0},
    "extension": {"run": extension_bound, "expected": None, "limit": None},
    "torus": {"run": torus_winding, "expected": 5 * np.pi ** 2, "limit": None},
}


def run_benchmark(name: str, runs: int, radial: int, angular: int) -> List[Dict[str, Any]]:
    """Time `runs` evaluations of one case"""
    case = BENCHMARK_CASES[name]
    print(f"Running benchmark {name} at {radial}x{angular} ({runs} runs)...")
    results = []
    for i in range(runs):
        start_time = time.time()
        try:
            value = case["run"](radial, angular)
            results.append({"time": time.time() - start_time, "value": value, "success": True})
            print(f"  Run {i+1}/{runs} completed in {results[-1]['time']:.2f} seconds, value {value:.10g}")
        except Exception as e:
            results.append({"time": time.time() - start_time, "value": None, "success": False, "error": str(e)})
            print(f"  Run {i+1}/{runs} failed: {str(e)}")
    return results


def print_benchmark_results(name: str, results: List[Dict[str, Any]]) -> None:
    """Print timing statistics and the check against the expected value"""
    case = BENCHMARK_CASES[name]
    times = [r["time"] for r in results if r["success"]]
    failed = [r for r in results if not r["success"]]

    print(f"\nBenchmark Results ({name}):")
    print(f"  Successful runs: {len(times)}")
    print(f"  Failed runs: {len(failed)}")

    if times:
        print(f"\nRun Time Statistics (seconds):")
        print(f"  Min: {min(times):.2f}")
        print(f"  Max: {max(times):.2f}")
        print(f"  Mean: {statistics.mean(times):.2f}")
        print(f"  Median: {statistics.median(times):.2f}")
        try:
            print(f"  90th percentile: {statistics.quantiles(times, n=10)[-1]:.2f}")
        except statistics.StatisticsError:
            # Not enough data points for percentiles
            pass
        if case["limit"] is not None:
            status = "✅ within" if max(times) < case["limit"] else "❌ over"
            print(f"  {status} the {case['limit']:.0f} s limit")

    values = [r["value"] for r in results if r["success"]]
    if values and case["expected"] is not None:
        gap = abs(values[-1] - case["expected"]) / abs(case["expected"])
        print(f"  Value {values[-1]:.10g}, expected {case['expected']:.10g}, relative gap {gap:.3e}")

    for i, result in enumerate(failed):
        print(f"  Error {i+1}: {result.get('error', 'Unknown error')}")


def main():
    parser = argparse.ArgumentParser(description="VortexLab Benchmark Tool")
    parser.add_argument("--case", choices=list(BENCHMARK_CASES.keys()) + ["all"], default="all",
                        help="Case to time (default: all)")
    parser.add_argument("--runs", type=int, default=3,
                        help="Number of runs per case (default: 3)")
    parser.add_argument("--radial", type=int, default=settings.DEFAULT_RADIAL_NODES,
                        help=f"Radial nodes (default: {settings.DEFAULT_RADIAL_NODES})")
    parser.add_argument("--angular", type=int, default=settings.DEFAULT_ANGULAR_NODES,
                        help=f"Angular nodes (default: {settings.DEFAULT_ANGULAR_NODES})")

    args = parser.parse_args()
    names = list(BENCHMARK_CASES.keys()) if args.case == "all" else [args.case]

    start_time = time.time()
    for name in names:
        results = run_benchmark(name, args.runs, args.radial, args.angular)
        print_benchmark_results(name, results)
    print(f"\nBenchmark completed in {time.time() - start_time:.2f} seconds")


if __name__ == "__main__":
    main()
