#!/usr/bin/env python3
import subprocess
import sys
import time
import argparse
from datetime import datetime

# Available test groups
TEST_GROUPS = {
    "grid": {
        "path": "tests/test_grid_service.py",
        "description": "Polar grids, quadrature and boundary transforms"
    },
    "maps": {
        "path": "tests/test_map_service.py",
        "description": "Singular maps, winding numbers and detection"
    },
    "hodge": {
        "path": "tests/test_hodge_service.py",
        "description": "Hodge decomposition, mirror potentials and Neumann data"
    },
    "energy": {
        "path": "tests/test_energy_service.py",
        "description": "Renormalized energy, lift, gauge projection and first variation"
    },
    "bounds": {
        "path": "tests/test_bounds_service.py",
        "description": "Count bound, level-set flux, extension and stability"
    },
    "torus": {
        "path": "tests/test_torus_service.py",
        "description": "Periodic decomposition and torus energy"
    },
    "minimize": {
        "path": "tests/test_minimize_service.py",
        "description": "Multistart simplex search over vortex positions"
    },
    "config": {
        "path": "tests/test_config.py",
        "description": "Problem configs, presets and reports"
    },
    "acceptance": {
        "path": "tests/test_acceptance.py",
        "description": "Acceptance-size families, levels and resolutions"
    },
    "cli": {
        "path": "tests/test_cli.py",
        "description": "Command dispatch and exit statuses"
    }
}


def pytest_command(path, verbose=False, slow=False, keyword=None):
    cmd = [sys.executable, "-m", "pytest", path, "-v" if verbose else "-q"]
    if not slow:
        cmd += ["-m", "not slow"]
    if keyword:
        cmd += ["-k", keyword]
    return cmd


def run_group(name, path, verbose=False, slow=False, keyword=None):
    """Run one group in its own interpreter; returns a result record."""
    started = time.time()
    print(f"\n{'-' * 80}\n[{name}] {path}\n{'-' * 80}")
    record = {"group": name, "return_code": None, "success": False}
    try:
        completed = subprocess.run(
            pytest_command(path, verbose, slow, keyword),
            check=False,
            capture_output=not verbose,
            text=True,
        )
    except OSError as e:
        record["error"] = str(e)
        print(f"[{name}] could not start pytest: {e}")
    else:
        record["return_code"] = completed.returncode
        # 5: every test of the group was deselected by the marker or keyword
        record["success"] = completed.returncode in (0, 5)
        if not verbose and not record["success"]:
            print(completed.stdout)
            print(completed.stderr)
    record["execution_time"] = time.time() - started
    status = "ok" if record["success"] else f"FAILED (code {record['return_code']})"
    print(f"[{name}] {status} in {record['execution_time']:.2f}s")
    return record


def run_tests(groups, verbose=False, slow=False, keyword=None, fail_fast=False):
    """Run the named groups in order; unknown names are reported and skipped."""
    print(f"VortexLab tests started {datetime.now():%Y-%m-%d %H:%M:%S}"
          f" (slow tests {'included' if slow else 'skipped'})")
    started = time.time()
    results = []
    for name in groups:
        group = TEST_GROUPS.get(name)
        if group is None:
            print(f"Unknown test group {name!r}; known groups: {', '.join(TEST_GROUPS)}")
            continue
        print(f"\n{name}: {group['description']}")
        results.append(run_group(name, group["path"], verbose, slow, keyword))
        if fail_fast and not results[-1]["success"]:
            print("Stopping after the first failing group")
            break
    return results, time.time() - started


def print_summary(results, total_time):
    failed = [r["group"] for r in results if not r["success"]]
    print(f"\n{'=' * 80}\nSUMMARY: {len(results) - len(failed)}/{len(results)} groups passed"
          f" in {total_time:.2f}s\n{'=' * 80}")
    for record in sorted(results, key=lambda r: r["execution_time"], reverse=True):
        mark = "PASS" if record["success"] else "FAIL"
        print(f"  {mark}  {record['group']:<10} {record['execution_time']:8.2f}s")
    if failed:
        print(f"\nFailed groups: {', '.join(failed)}")


def main():
    parser = argparse.ArgumentParser(description="Run the VortexLab test groups")
    parser.add_argument("--tests", type=str, help="Comma-separated group names (default: all)")
    parser.add_argument("--list", action="store_true", help="List the groups and exit")
    parser.add_argument("--slow", action="store_true", help="Include acceptance-scale tests marked slow")
    parser.add_argument("-k", dest="keyword", help="Passed through to pytest -k")
    parser.add_argument("--fail-fast", action="store_true", help="Stop at the first failing group")
    parser.add_argument("--verbose", "-v", action="store_true", help="Stream pytest output")
    args = parser.parse_args()

    if args.list:
        for name, group in TEST_GROUPS.items():
            print(f"{name:<10} {group['path']:<36} {group['description']}")
        return

    groups = [t.strip() for t in args.tests.split(",")] if args.tests else list(TEST_GROUPS)
    results, total_time = run_tests(groups, args.verbose, args.slow, args.keyword, args.fail_fast)
    print_summary(results, total_time)
    sys.exit(0 if results and all(r["success"] for r in results) else 1)


if __name__ == "__main__":
    main()
