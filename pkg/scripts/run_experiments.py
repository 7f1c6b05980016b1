"""
Per-c Uniformity Sweeps over Power Maps and Fields

This script:
1. Builds a grid of fields and test functions (x^2, x^3, Gold, inverse, ...)
2. Computes the cc- and c-uniformity for every c in GF(p^n)^* minus 1
3. Saves one row per (field, function, kind, c) to CSV for analysis and plotting

Usage:
    python scripts/run_experiments.py
    python scripts/run_experiments.py 2^4,2^5,3^3

Output:
    - results/experiment_results.csv
"""

import csv
import os
import sys
import time
from typing import Any, Dict, List, Tuple

# Add parent directory to path so we can import root modules
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import settings
from diffspec import KIND_CC, KINDS, Classification, per_c_profile
from func_generator import generate_random_function
from funcrep import VecFunc, compose, from_power, identity, pointwise_add, trace_function
from gf import FieldCtx, field_create

FIELDNAMES = ['field', 'p', 'n', 'func', 'kind', 'c', 'uniformity', 'label', 'profile_ms']


def test_functions(f: FieldCtx, seed: int) -> List[Tuple[str, VecFunc]]:
    """Named functions swept on one field."""
    funcs = [
        ('x^2', from_power(f, 2)),
        ('x^3', from_power(f, 3)),
        (f'x^{f.p + 1}', from_power(f, f.p + 1)),
        (f'x^{f.order - 2}', from_power(f, f.order - 2)),
    ]
    if f.p == 2:
        funcs.append(('x+Tr(x^3)', pointwise_add(identity(f), compose(trace_function(f, 1), from_power(f, 3)))))
    funcs.append(('random', generate_random_function(f, seed=seed)))
    # x^3 and x^(p+1) coincide in characteristic 2
    seen, unique = set(), []
    for label, F in funcs:
        if F.lut.tobytes() not in seen:
            seen.add(F.lut.tobytes())
            unique.append((label, F))
    return unique


def run_single_experiment(f: FieldCtx, label: str, F: VecFunc, kind: str, workers: int) -> List[Dict[str, Any]]:
    print(f"  {label:<12} {kind:<3}", end=" ", flush=True)
    start = time.perf_counter()
    profile = per_c_profile(F, kind, workers=workers)
    elapsed_ms = (time.perf_counter() - start) * 1000

    rows = []
    for c, u in profile.values.items():
        rows.append({
            'field': f.spec,
            'p': f.p,
            'n': f.n,
            'func': label,
            'kind': kind,
            'c': c,
            'uniformity': u,
            'label': Classification(c, u).label if kind == KIND_CC else '',
            'profile_ms': round(elapsed_ms, 3),
        })
    print(f"spectrum {profile.spectrum} ({elapsed_ms:.1f}ms)")
    return rows


def run_all_experiments(
    fields: List[Tuple[int, int]] = None,
    output_file: str = "results/experiment_results.csv",
    seed: int = settings.DEFAULT_SEED,
    workers: int = settings.DEFAULT_WORKERS,
) -> List[Dict[str, Any]]:
    if fields is None:
        fields = [(2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (5, 2)]

    print("=" * 70)
    print("PER-c UNIFORMITY EXPERIMENTS")
    print("=" * 70)
    print(f"Fields: {', '.join(f'GF({p}^{n})' for p, n in fields)}")
    print(f"Kinds: {', '.join(KINDS)}")
    print(f"Seed: {seed}   Workers: {workers}")
    print(f"Output file: {output_file}")
    print("=" * 70)

    all_rows = []
    for idx, (p, n) in enumerate(fields):
        f = field_create(p, n)
        print(f"\n[{idx + 1}/{len(fields)}] {f.spec}")
        print("-" * 70)
        for label, F in test_functions(f, seed + idx):
            for kind in KINDS:
                try:
                    all_rows.extend(run_single_experiment(f, label, F, kind, workers))
                except Exception as e:
                    print(f"  ERROR for {label} ({kind}): {e}")

    if all_rows:
        print(f"\n{'=' * 70}")
        print(f"Writing results to {output_file}...")
        out_dir = os.path.dirname(output_file)
        if out_dir:
            os.makedirs(out_dir, exist_ok=True)
        with open(output_file, 'w', newline='') as fh:
            writer = csv.DictWriter(fh, fieldnames=FIELDNAMES)
            writer.writeheader()
            writer.writerows(all_rows)
        print(f"[OK] Saved {len(all_rows)} result rows to {output_file}")
        print("=" * 70)
    return all_rows


def print_summary_table(results: List[Dict[str, Any]]):
    groups: Dict[Tuple[str, str, str], List[int]] = {}
    for row in results:
        groups.setdefault((row['field'], row['func'], row['kind']), []).append(row['uniformity'])

    print("\n" + "=" * 90)
    print("SUMMARY TABLE (over all c != 1)")
    print("=" * 90)
    print(f"{'Field':<10} {'Function':<14} {'Kind':<6} {'#c':<6} {'Min':<6} {'Max':<6} {'Mean':<8} {'#PccN':<6}")
    print("-" * 90)
    for (field, func, kind), values in groups.items():
        pccn = sum(1 for u in values if u == 1)
        print(f"{field:<10} {func:<14} {kind:<6} {len(values):<6} {min(values):<6} {max(values):<6} "
              f"{sum(values) / len(values):<8.2f} {pccn:<6}")
    print("=" * 90)


if __name__ == "__main__":
    FIELDS = None
    OUTPUT_FILE = "results/experiment_results.csv"

    if len(sys.argv) > 1:
        try:
            FIELDS = [tuple(int(t) for t in item.split('^')) for item in sys.argv[1].split(',')]
            print(f"Using custom fields: {FIELDS}")
        except ValueError:
            print("Usage: python scripts/run_experiments.py [fields]")
            print("  fields: comma-separated p^n list, e.g. '2^4,3^3'")
            sys.exit(1)

    results = run_all_experiments(fields=FIELDS, output_file=OUTPUT_FILE)

    if results:
        print_summary_table(results)
        print("\n[OK] Experiments complete!")
        print(f"  Results saved to: {OUTPUT_FILE}")
        print(f"  Total rows: {len(results)}")
        print("\nNext steps:")
        print("  1. Analyze results: python scripts/analyze_results.py")
        print(f"  2. Generate plots: python plot_results.py {OUTPUT_FILE}")
